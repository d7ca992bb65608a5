#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "debranges/run.hpp"

using namespace debranges;

namespace {
const cplx I{0.0, 1.0};

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_text(const std::string& json) {
  std::ostringstream out, err;
  int code;
  try {
    code = run(parse_config(json), out, err);
  } catch (const ConfigError& e) {
    err << e.what();
    code = kExitConfigError;
  }
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

std::string field_of(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}
}  // namespace

TEST_CASE("run examples") {
  auto ok = run_text(R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1]],"command":"verify"})");
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("PASS ") != std::string::npos);

  auto noncontig = run_text(R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1],[0,2],[0,1]],"command":"verify"})");
  CHECK(noncontig.code == kExitOk);

  auto missing = run_text(R"({"space":{"family":"paley_wiener","x":1},"command":"kernel"})");
  CHECK(missing.code == kExitConfigError);
}

TEST_CASE("config validation names the offending field") {
  CHECK(field_of("not json") == "<document>");
  CHECK(field_of("[1,2]") == "<document>");
  CHECK(field_of(R"({"command":"verify"})") == "space");
  CHECK(field_of(R"({"space":{"family":"paley_wiener","x":1}})") == "command");
  CHECK(field_of(R"({"space":{"family":"gaussian"},"command":"verify"})") == "space.family");
  CHECK(field_of(R"({"space":{"family":"paley_wiener"},"command":"verify"})") == "space.x");
  CHECK(field_of(R"({"space":{"family":"paley_wiener","x":-1},"command":"verify"})") == "space");
  CHECK(field_of(R"({"space":{"family":"polynomial_hb","roots":[[0,1]]},"command":"verify"})") == "space");
  CHECK(field_of(R"({"space":{"family":"paley_wiener","x":1},"command":"plot"})") == "command");
  CHECK(field_of(R"({"space":{"family":"paley_wiener","x":1},"command":"verify","sigma":[[0,1,2]]})") == "sigma[0]");
  CHECK(field_of(R"({"space":{"family":"paley_wiener","x":1},"command":"verify","seed":-3})") == "seed");
  CHECK(field_of(R"({"space":{"family":"paley_wiener","x":1},"command":"verify","tolerances":{"bogus":1}})") ==
        "tolerances.bogus");
  CHECK(field_of(R"({"space":{"family":"paley_wiener","x":1},"command":"verify","output":{"format":"xml"}})") ==
        "output.format");
  const std::string grid_base = R"({"space":{"family":"paley_wiener","x":1},"command":"kernel","grid":)";
  CHECK(field_of(grid_base + R"({"re_min":0,"re_max":1,"re_steps":0,"im_min":0,"im_max":1,"im_steps":2}})") ==
        "grid.re_steps");
  CHECK(field_of(grid_base + R"({"re_min":2,"re_max":1,"re_steps":2,"im_min":0,"im_max":1,"im_steps":2}})") ==
        "grid.re_min");
  CHECK(field_of(grid_base + R"({"re_min":0,"re_max":1,"re_steps":2,"im_min":0,"im_max":1,"im_steps":2},"eval_points":[[0,0]]})") ==
        "grid");
}

TEST_CASE("exit codes for numerical breakdown and budget") {
  auto singular = run_text(
      R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1],[1e-9,1]],"command":"verify"})");
  CHECK(singular.code == kExitNumericalBreakdown);
  CHECK(singular.err.find("condition estimate") != std::string::npos);

  auto budget = run_text(
      R"({"space":{"family":"polynomial_hb","roots":[[0,-1],[0,-2],[0,-3],[0,-4]],"max_derivative_order":2},"sigma":[[0,1],[0,1],[0,1]],"command":"structure","eval_points":[[0,0]]})");
  CHECK(budget.code == kExitConfigError);
  CHECK(budget.err.find("sigma") != std::string::npos);

  auto empty = run_text(R"({"space":{"family":"paley_wiener","x":1},"sigma":[],"command":"verify"})");
  CHECK(empty.code == kExitOk);
  CHECK(empty.out.find("nan") == std::string::npos);

  auto pw_off = run_text(R"({"space":{"family":"polynomial_hb","roots":[[0,-1]]},"command":"pw-example"})");
  CHECK(pw_off.code == kExitConfigError);
}

TEST_CASE("failing checks exit 1 with a FAIL summary") {
  auto r = run_text(
      R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1]],"command":"verify","tolerances":{"theorem2":0}})");
  CHECK(r.code == kExitCheckFailed);
  const auto tail = r.out.substr(r.out.rfind("FAIL"));
  CHECK(tail.rfind("FAIL ", 0) == 0);
}

TEST_CASE("kernel grid output: order, schema, round trip") {
  auto r = run_text(
      R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1]],"command":"kernel","z_points":[[0.5,1]],"grid":{"re_min":-1,"re_max":1,"re_steps":3,"im_min":0,"im_max":2,"im_steps":2}})");
  REQUIRE(r.code == kExitOk);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"re_z", "im_z", "re_w", "im_w", "re_val", "im_val"});

  auto cfg = parse_config(
      R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1]],"command":"kernel","grid":{"re_min":-1,"re_max":1,"re_steps":3,"im_min":0,"im_max":2,"im_steps":2}})");
  auto pts = evaluation_points(cfg);
  REQUIRE(pts.size() == 6);
  CHECK(pts[0] == cplx{-1.0, 0.0});
  CHECK(pts[1] == cplx{0.0, 0.0});
  CHECK(pts[3] == cplx{-1.0, 2.0});

  auto gs = GramSystem::build(cfg.space, canonicalize(cfg.sigma));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    REQUIRE(rows[k].size() == 6);
    const cplx z{std::strtod(rows[k][0].c_str(), nullptr), std::strtod(rows[k][1].c_str(), nullptr)};
    const cplx w{std::strtod(rows[k][2].c_str(), nullptr), std::strtod(rows[k][3].c_str(), nullptr)};
    const cplx v{std::strtod(rows[k][4].c_str(), nullptr), std::strtod(rows[k][5].c_str(), nullptr)};
    CHECK(z == cplx{0.5, 1.0});
    CHECK(w == pts[k - 1]);
    // 17 digits: parsing back gives the exact double
    CHECK(v == sigma_kernel(gs, z, w));
  }
}

TEST_CASE("structure output and format_number") {
  auto r = run_text(
      R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1]],"command":"structure","which":"F_sigma","eval_points":[[0,0],[0,1]]})");
  REQUIRE(r.code == kExitOk);
  auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"re_w", "im_w", "re_val", "im_val"});
  auto ssf = derive(GramSystem::build(StructureFunction::paley_wiener(1.0), canonicalize(std::vector<cplx>{I})));
  const cplx v{std::strtod(rows[1][2].c_str(), nullptr), std::strtod(rows[1][3].c_str(), nullptr)};
  CHECK(v == ssf.eval(Which::F_sigma, 0.0));

  for (double d : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::strtod(format_number(d).c_str(), nullptr) == d);

  auto st = run_text(
      R"({"space":{"family":"paley_wiener","x":1},"command":"structure","eval_points":[[0,0]],"output":{"format":"structured-text"}})");
  CHECK(st.out.find("w=(0,0) value=(1,0)") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = (dir / "debranges_det_a.csv").string(), p2 = (dir / "debranges_det_b.csv").string();
  const std::string base =
      R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1],[0,1],[1,1]],"command":"verify","seed":99,"output":{"path":")";
  std::ostringstream o, e;
  CHECK(run(parse_config(base + p1 + "\"}}"), o, e) == kExitOk);
  CHECK(run(parse_config(base + p2 + "\"}}"), o, e) == kExitOk);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string a = slurp(p1), b = slurp(p2);
  CHECK(!a.empty());
  CHECK(a == b);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("pw-example command") {
  auto r = run_text(
      R"({"space":{"family":"paley_wiener","x":1},"sigma":[[0,1],[1,1]],"command":"pw-example","eval_points":[[0.5,2]]})");
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("pw_det_star") != std::string::npos);
}
