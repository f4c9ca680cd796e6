#include "helly/report.hpp"

#include <charconv>
#include <cmath>

namespace helly {

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string report_csv(std::span<const SelectionCertificate> certs) {
  std::string out =
      "n,m,mode,param,s,alpha,alpha_over_sqrt_n,alpha_over_n32,verdicts,runtime_seconds,diameter_ratio_exact\n";
  for (const SelectionCertificate& c : certs) {
    const double n = static_cast<double>(c.dim);
    std::string failed;
    for (const auto& [name, pass] : c.verdicts)
      if (!pass) failed += (failed.empty() ? "" : ";") + name;
    const bool sym = c.mode == FamilyMode::Symmetric;
    std::string param;
    if (sym && c.symmetric) param = "d=" + fmt(c.symmetric->d);
    if (!sym && c.general) param = "eps=" + fmt(c.general->eps);
    out += std::to_string(c.dim) + ',' + std::to_string(c.body_count) + ',' + (sym ? "symmetric" : "general") + ',' +
           param + ',' + std::to_string(c.selected.size()) + ',' + fmt(c.alpha) + ',' + fmt(c.alpha / std::sqrt(n)) +
           ',' + fmt(c.alpha / (n * std::sqrt(n))) + ',' + (failed.empty() ? "pass" : failed) + ',' +
           (c.runtime_seconds ? fmt(*c.runtime_seconds) : "") + ',' +
           (c.diameter && c.diameter->exact ? fmt(c.diameter->ratio) : "") + '\n';
  }
  return out;
}

}  // namespace helly
