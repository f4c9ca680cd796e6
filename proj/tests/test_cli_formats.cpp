#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "helly/error.hpp"
#include "helly/instance_io.hpp"
#include "helly/oracle.hpp"
#include "helly/report.hpp"
#include "helly/rng.hpp"

using namespace helly;

namespace {

BodyFamily cube2() {
  BodyFamily f;
  f.mode = FamilyMode::Symmetric;
  f.dim = 2;
  f.bodies.push_back({"x", {{{1, 0}, 1.0}}});
  f.bodies.push_back({"y", {{{0, 1}, 1.0}}});
  return f;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Outside;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("instance files round-trip") {
  const BodyFamily f = gen_halfspace_family(3, 12, 0.1, 4);
  const std::string text = instance_to_json(f);
  const BodyFamily g = instance_from_json(text);
  CHECK(g.mode == f.mode);
  CHECK(g.dim == 3);
  REQUIRE(g.bodies.size() == f.bodies.size());
  for (std::size_t b = 0; b < f.bodies.size(); ++b) {
    CHECK(g.bodies[b].id == f.bodies[b].id);
    REQUIRE(g.bodies[b].constraints.size() == f.bodies[b].constraints.size());
    for (std::size_t k = 0; k < f.bodies[b].constraints.size(); ++k) {
      CHECK(g.bodies[b].constraints[k].normal == f.bodies[b].constraints[k].normal);
      CHECK(g.bodies[b].constraints[k].offset == f.bodies[b].constraints[k].offset);
    }
  }
  CHECK(instance_to_json(g) == text);
}

TEST_CASE("malformed instances are rejected") {
  CHECK(code_of([] { instance_from_json("{"); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { instance_from_json(R"({"mode":"round","dimension":2,"bodies":[]})"); }) ==
        ErrorCode::InvalidInput);
  CHECK(code_of([] {
          instance_from_json(R"({"mode":"symmetric","dimension":2,"bodies":[{"id":"a","constraints":[{"a":[1],"c":1}]}]})");
        }) == ErrorCode::InvalidInput);
  CHECK(code_of([] {
          instance_from_json(R"({"mode":"symmetric","dimension":2,"bodies":[{"id":"a","constraints":[{"a":[1,0],"c":-1}]}]})");
        }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { instance_from_json(R"({"mode":"general","dimension":2})"); }) == ErrorCode::InvalidInput);
}

TEST_CASE("certificates round-trip byte for byte") {
  const BodyFamily f = gen_slab_family(3, 10, 6);
  SelectionCertificate c = select_symmetric(f);
  c.alpha_exact = containment_factor_exact(c.selected, certificate_frame(f, c));
  c.diameter = diameter_report(f, c, true);
  c.verdicts = recheck_certificate(f, c);
  const std::string text = certificate_to_json(c);
  const SelectionCertificate back = certificate_from_json(text);
  CHECK(certificate_to_json(back) == text);
  CHECK(back.alpha == c.alpha);
  CHECK(back.john.weights == c.john.weights);
  CHECK(back.john.vectors == c.john.vectors);
  CHECK(back.symmetric->b == c.symmetric->b);
  CHECK(recheck_certificate(f, back) == c.verdicts);

  const BodyFamily h = gen_halfspace_family(3, 20, 0.1, 6);
  const SelectionCertificate g = select_general(h);
  const std::string gt = certificate_to_json(g);
  const SelectionCertificate gb = certificate_from_json(gt);
  CHECK(certificate_to_json(gb) == gt);
  CHECK(gb.general->shifted.v == g.general->shifted.v);
  CHECK(gb.general->caratheodory.rho == g.general->caratheodory.rho);
  CHECK(recheck_certificate(h, gb) == g.verdicts);
}

TEST_CASE("non-finite values are stored as strings") {
  SelectionCertificate c = select_symmetric(cube2());
  c.alpha = std::numeric_limits<double>::infinity();
  c.c_reported = std::numeric_limits<double>::quiet_NaN();
  const std::string text = certificate_to_json(c);
  CHECK(text.find("\"alpha\": \"inf\"") != std::string::npos);
  CHECK(text.find("\"c\": \"nan\"") != std::string::npos);
  const SelectionCertificate back = certificate_from_json(text);
  CHECK(std::isinf(back.alpha));
  CHECK(std::isnan(back.c_reported));
}

TEST_CASE("certificates are deterministic") {
  const BodyFamily f = gen_halfspace_family(4, 16, 0.1, 12);
  CHECK(certificate_to_json(select_general(f)) == certificate_to_json(select_general(f)));
  const BodyFamily s = gen_slab_family(4, 16, 12);
  CHECK(certificate_to_json(select_symmetric(s)) == certificate_to_json(select_symmetric(s)));
}

TEST_CASE("a certificate whose mode and stage disagree is rejected") {
  const SelectionCertificate c = select_symmetric(cube2());
  std::string text = certificate_to_json(c);
  const auto pos = text.find("\"mode\": \"symmetric\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 19, "\"mode\": \"general\"");
  CHECK(code_of([&] { certificate_from_json(text); }) == ErrorCode::InvalidInput);
}

TEST_CASE("report for a single cube run") {
  const std::vector<SelectionCertificate> certs = {select_symmetric(cube2())};
  const auto rows = parse_csv(report_csv(certs));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"n", "m", "mode", "param", "s", "alpha", "alpha_over_sqrt_n",
                                            "alpha_over_n32", "verdicts", "runtime_seconds",
                                            "diameter_ratio_exact"});
  CHECK(rows[1][0] == "2");
  CHECK(rows[1][2] == "symmetric");
  CHECK(rows[1][3] == "d=4");
  CHECK(rows[1][4] == "2");
  CHECK(rows[1][5] == "1");
  CHECK(rows[1][8] == "pass");
  CHECK(rows[1][9].empty());
  CHECK(rows[1][10].empty());
}

TEST_CASE("report over 20 plane instances") {
  std::vector<SelectionCertificate> certs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) certs.push_back(select_symmetric(gen_slab_family(2, 12, seed)));
  certs[3].diameter = diameter_report(gen_slab_family(2, 12, 3), certs[3], true);
  certs[5].runtime_seconds = 0.25;
  const auto rows = parse_csv(report_csv(certs));
  REQUIRE(rows.size() == 21);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 11);
    CHECK(std::stod(rows[r][5]) <= 3.0 * std::sqrt(2.0) * (1 + 1e-5));
    CHECK(std::stod(rows[r][6]) == doctest::Approx(std::stod(rows[r][5]) / std::sqrt(2.0)));
    CHECK(rows[r][8] == "pass");
    CHECK(rows[r][10].empty() == (r != 4));
  }
  CHECK(rows[6][9] == "0.25");
}

TEST_CASE("failing verdicts are listed by name") {
  SelectionCertificate c = select_symmetric(cube2());
  c.set_verdict("alpha_reproduced", false);
  c.set_verdict("bss_size", false);
  const auto rows = parse_csv(report_csv(std::vector{c}));
  CHECK(rows[1][8] == "bss_size;alpha_reproduced");
}
