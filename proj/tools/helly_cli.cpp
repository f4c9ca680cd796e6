#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "helly/error.hpp"
#include "helly/instance_io.hpp"
#include "helly/oracle.hpp"
#include "helly/pipeline.hpp"
#include "helly/report.hpp"

using namespace helly;

namespace {

enum Exit : int { kOk = 0, kVerdictFailed = 2, kBadInput = 3, kOracleCaps = 4 };

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::OracleTooLarge:
      return kOracleCaps;
    case ErrorCode::JohnExtractionFailed:
    case ErrorCode::BarrierStuck:
    case ErrorCode::ShiftCertificateFailed:
    case ErrorCode::CaratheodoryFailed:
    case ErrorCode::SharpnessGenFailed:
      return kVerdictFailed;
    default:
      return kBadInput;
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

void print_summary(const SelectionCertificate& c) {
  std::cerr << "s = " << c.selected.size() << ", alpha = " << c.alpha << ", bound = " << c.bound_claimed << "\n";
  for (const auto& [name, pass] : c.verdicts)
    if (!pass) std::cerr << "verdict failed: " << name << "\n";
}

// Adds the oracle quantities, or the bound-mode diameter, and refreshes the verdicts.
void finish(const BodyFamily& family, SelectionCertificate& c, bool exact) {
  c.alpha_exact.reset();
  if (exact) c.alpha_exact = containment_factor_exact(c.selected, certificate_frame(family, c));
  c.diameter = diameter_report(family, c, exact);
  c.verdicts = recheck_certificate(family, c);
}

struct SelectArgs {
  std::string in, out;
  double d = 4.0;
  double eps = 0.5;
  double tol = 1e-5;
  std::uint64_t seed = 0;
  bool exact = false;
  bool timing = false;
};

int run_select(const SelectArgs& a, bool symmetric) {
  const BodyFamily family = instance_from_json(read_text_file(a.in));
  PipelineOptions o;
  o.d = a.d;
  o.eps = a.eps;
  o.tol_john = a.tol;
  o.seed = a.seed;
  const auto t0 = std::chrono::steady_clock::now();
  SelectionCertificate c = symmetric ? select_symmetric(family, o) : select_general(family, o);
  finish(family, c, a.exact);
  if (a.timing) c.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(a.out, certificate_to_json(c));
  print_summary(c);
  return c.all_pass() ? kOk : kVerdictFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helly-type subfamily selection with certificates"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  bool sharpness = false;
  std::size_t gen_n = 2, gen_count = 64;
  std::uint64_t gen_seed = 0;
  std::string gen_mode = "symmetric", gen_out;
  double gen_margin = 0.1;
  gen->add_flag("--sharpness", sharpness, "random unit-offset slabs certified inside 2B");
  gen->add_option("--n", gen_n, "dimension")->check(CLI::PositiveNumber);
  gen->add_option("--N,--bodies", gen_count, "number of bodies")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--mode", gen_mode)->check(CLI::IsMember({"symmetric", "general"}));
  gen->add_option("--margin", gen_margin, "interior ball radius for general families");
  gen->add_option("--out", gen_out, "output file (stdout if omitted)");

  // select-sym / select-gen
  SelectArgs sa, ga;
  auto* sym = app.add_subcommand("select-sym", "symmetric selection");
  auto* gsel = app.add_subcommand("select-gen", "general selection");
  for (auto [cmd, args] : {std::pair{sym, &sa}, std::pair{gsel, &ga}}) {
    cmd->add_option("--in", args->in, "instance file")->required();
    cmd->add_option("--out", args->out, "certificate file (stdout if omitted)");
    cmd->add_option("--tol", args->tol, "John residual tolerance");
    cmd->add_option("--seed", args->seed, "seed for the sampled checks");
    cmd->add_flag("--exact-oracle", args->exact, "add exact containment factor and diameters (n <= 6)");
    cmd->add_flag("--with-timing", args->timing, "record wall time (breaks byte determinism)");
  }
  sym->add_option("--d", sa.d, "sparsifier parameter, > 1");
  gsel->add_option("--eps", ga.eps, "shift parameter, > 0");

  // reduce
  auto* red = app.add_subcommand("reduce", "greedy reduction of a certificate to 2n bodies");
  std::string red_in, red_cert, red_out;
  bool red_exact = false;
  red->add_option("--in", red_in)->required();
  red->add_option("--cert", red_cert)->required();
  red->add_option("--out", red_out);
  red->add_flag("--exact-oracle", red_exact);

  // certify
  auto* cer = app.add_subcommand("certify", "recompute every verdict of a certificate");
  std::string cer_in, cer_cert;
  cer->add_option("--in", cer_in)->required();
  cer->add_option("--cert", cer_cert)->required();

  // report
  auto* rep = app.add_subcommand("report", "CSV summary of certificates");
  std::vector<std::string> rep_files;
  std::string rep_out;
  rep->add_option("certificates", rep_files)->required();
  rep->add_option("--out", rep_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*gen) {
      BodyFamily f;
      if (sharpness) {
        const SharpnessInstance s = gen_sharpness_instance(gen_n, gen_count, gen_seed);
        std::cerr << "circumradius in [" << s.circumradius.lower << ", " << s.circumradius.upper << "] after "
                  << s.attempts << " draw(s)\n";
        f = s.family;
      } else if (gen_mode == "symmetric") {
        f = gen_slab_family(gen_n, gen_count, gen_seed);
      } else {
        f = gen_halfspace_family(gen_n, gen_count, gen_margin, gen_seed);
      }
      emit(gen_out, instance_to_json(f));
      return kOk;
    }
    if (*sym) return run_select(sa, true);
    if (*gsel) return run_select(ga, false);
    if (*red) {
      const BodyFamily family = instance_from_json(read_text_file(red_in));
      const SelectionCertificate c = certificate_from_json(read_text_file(red_cert));
      SelectionCertificate r = reduce_to_2n(family, c);
      finish(family, r, red_exact);
      emit(red_out, certificate_to_json(r));
      print_summary(r);
      return r.all_pass() ? kOk : kVerdictFailed;
    }
    if (*cer) {
      const BodyFamily family = instance_from_json(read_text_file(cer_in));
      const SelectionCertificate c = certificate_from_json(read_text_file(cer_cert));
      const auto fresh = recheck_certificate(family, c);
      bool ok = fresh == c.verdicts;
      if (!ok) std::cout << "stored verdicts differ from the recomputed ones\n";
      for (const auto& [name, pass] : fresh) {
        std::cout << (pass ? "PASS " : "FAIL ") << name << "\n";
        ok = ok && pass;
      }
      return ok ? kOk : kVerdictFailed;
    }
    if (*rep) {
      std::vector<SelectionCertificate> certs;
      for (const std::string& p : rep_files) certs.push_back(certificate_from_json(read_text_file(p)));
      emit(rep_out, report_csv(certs));
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
