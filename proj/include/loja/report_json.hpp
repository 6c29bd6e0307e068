#pragma once

#include "loja/blowup.hpp"
#include "loja/estimator.hpp"
#include "loja/flow.hpp"
#include "loja/inequality_report.hpp"
#include "loja/morse_bott.hpp"
#include "loja/snc.hpp"

#include <json.hpp>

#include <string>

namespace loja {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "loja-lab/1";

Json to_json(const InequalityCheckReport& r);
/// The gradient check may be null when no check was run.
Json to_json(const MonomialFactorization& mf, const ExponentReport& e, const InequalityCheckReport* check);
Json to_json(const ResolutionResult& r);
Json to_json(const BoundResult& b);
Json to_json(const MorseBottReport& r);
Json to_json(const GmbCheckResult& r);
Json to_json(const ExponentEstimate& e);
Json to_json(const ConsistencyVerdict& v);
/// Summary only; samples go to the trajectory CSV.
Json to_json(const Trajectory& t);
Json to_json(const LengthBoundCheck& c);
Json to_json(const ArcLengthIdentityCheck& c);

/// Columns t, x_1..x_d, E, grad_norm, arc_length.
std::string trajectory_csv(const Trajectory& t);

}  // namespace loja
