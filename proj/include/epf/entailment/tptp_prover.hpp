#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "epf/prover/refute.hpp"

namespace epf::entailment {

// Runs the internal prover on a TPTP FOF problem and answers the way an
// external prover would: an "SZS status" line and, for refutations, a CNF
// proof between "SZS output start/end" whose input clauses cite their source
// statements with file('<file>', <name>). Returns the process exit code.
int tptp_prove(std::string_view problem, const std::string& file_name,
               const prover::ResourceBudget& budget, std::ostream& out);

}  // namespace epf::entailment
