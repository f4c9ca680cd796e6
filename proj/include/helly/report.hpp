#pragma once

#include <span>
#include <string>

#include "helly/pipeline.hpp"

namespace helly {

/// CSV with one row per certificate and the columns
///   n, m, mode, param, s, alpha, alpha_over_sqrt_n, alpha_over_n32,
///   verdicts, runtime_seconds, diameter_ratio_exact
/// `verdicts` is "pass" or the failing names joined by ';'. Missing runtime
/// and bound-mode diameter leave their fields empty.
std::string report_csv(std::span<const SelectionCertificate> certs);

}  // namespace helly
