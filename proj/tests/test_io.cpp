#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "cbs/commands.hpp"
#include "cbs/io.hpp"

using namespace cbs;
using json = nlohmann::json;

namespace {

const std::string kData = CBS_DATA_DIR;

struct Run {
  int code;
  std::string out, err;
};

template <class Opts, class Fn>
Run run(Fn fn, const Opts& o) {
  std::ostringstream out, err;
  const int code = fn(o, out, err);
  return {code, out.str(), err.str()};
}

// CSV rows (without header) of a command's stdout, dropping the trailing JSON line.
std::vector<std::vector<std::string>> csv_rows(const std::string& out) {
  auto rows = io::parse_csv(out);
  rows.erase(rows.begin());
  rows.pop_back();
  return rows;
}

json summary_of(const std::string& out) {
  const auto pos = out.rfind('{');
  return json::parse(out.substr(pos));
}

}  // namespace

TEST(FormatReal, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 0.75, 1e-300, 123456789.125, -2.5}) EXPECT_EQ(std::stod(io::format_real(v)), v);
  EXPECT_EQ(io::format_real(0.75), "0.75");
}

TEST(MatrixInput, ParsesFixtures) {
  const auto in = io::parse_matrix_input(io::read_json_file(kData + "/matrix_2x2.json"));
  EXPECT_EQ(in.matrix.size(), 2u);
  EXPECT_EQ(in.matrix(0, 1), 0.5);
  EXPECT_EQ(in.partition.u(), std::vector<std::size_t>{0});
  const auto back = io::parse_matrix_input(io::to_json(in.matrix, in.partition));
  EXPECT_EQ(back.matrix(1, 0), 0.5);
}

TEST(MatrixInput, FieldDiagnostics) {
  auto expect_msg = [](const json& j, const std::string& needle) {
    try {
      io::parse_matrix_input(j);
      FAIL() << "accepted " << j.dump();
    } catch (const InputError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_msg(json{{"entries", {1}}, {"u_indices", {0}}, {"v_indices", {1}}}, "'n'");
  expect_msg(json{{"n", 2}, {"entries", {1, 0, 0}}, {"u_indices", {0}}, {"v_indices", {1}}}, "'entries'");
  expect_msg(json{{"n", 2}, {"entries", {1, 0, 0, "x"}}, {"u_indices", {0}}, {"v_indices", {1}}}, "entries");
  expect_msg(json{{"n", 2}, {"entries", {1, 0, 0, 1}}, {"u_indices", {0}}}, "'v_indices'");
  expect_msg(json{{"n", 2}, {"entries", {1, 0, 0, 1}}, {"u_indices", {0}}, {"v_indices", {0}}}, "twice");
  expect_msg(json{{"n", 2}, {"entries", {1, 5, 0, 1}}, {"u_indices", {0}}, {"v_indices", {1}}}, "asymmetric");
  EXPECT_THROW(io::read_json_file(kData + "/does_not_exist.json"), InputError);
}

TEST(MeshInput, ParsesAndRejects) {
  const auto mesh = io::parse_mesh_input(io::read_json_file(kData + "/mesh_unit_square.json"));
  EXPECT_EQ(mesh.dim(), 2);
  EXPECT_EQ(mesh.element_count(), 8u);
  EXPECT_EQ(io::parse_mesh_input(io::read_json_file(kData + "/mesh_two_tets.json")).element_count(), 2u);
  EXPECT_THROW(io::parse_mesh_input(json{{"dim", 4}, {"vertices", json::array()}, {"elements", json::array()}}),
               InputError);
  EXPECT_THROW(io::parse_mesh_input(json{{"dim", 2}, {"vertices", {{0, 0}, {1}}}, {"elements", {{0, 1, 2}}}}),
               InputError);
  EXPECT_THROW(io::parse_mesh_input(json{{"dim", 2}, {"vertices", {{0, 0}, {1, 0}, {0, 1}}}, {"elements", {{0, 1, -1}}}}),
               InputError);
}

TEST(Bounds, Table) {
  EXPECT_EQ(io::bound_for(2, Form::a), 0.75);
  EXPECT_EQ(io::bound_for(3, Form::a1), 0.9);
  EXPECT_EQ(io::bound_for(3, Form::a2), 0.9);
  EXPECT_FALSE(io::bound_for(3, Form::a));
  EXPECT_FALSE(io::bound_for(2, Form::a2));
}

TEST(Report, CsvRoundTripAndSummary) {
  io::Report r;
  r.add({"c0", "a", 0.3, 0.5769, 0.3846, 0.6679129328113010, std::sqrt(0.6679129328113010), 3, 0, "eigen"});
  r.add({"c1", "a1", std::nullopt, 1.0, 1.0, 0.75, std::sqrt(0.75), 5, 3, "eigen"});
  std::ostringstream os;
  r.write_csv(os);
  const auto rows = io::parse_csv(os.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "case");
  EXPECT_EQ(rows[2][2], "");
  EXPECT_EQ(std::stod(rows[1][5]), 0.6679129328113010);
  const auto s = r.summarize(0.75, 9);
  EXPECT_EQ(s.max_gamma2, 0.75);
  EXPECT_TRUE(*s.bound_satisfied);
  std::ostringstream js;
  io::write_summary(js, s);
  const auto j = json::parse(js.str());
  EXPECT_EQ(j["max_gamma2"], 0.75);
  EXPECT_EQ(j["seed"], 9);
  EXPECT_FALSE(r.summarize(0.7, 0).bound_satisfied.value());
  EXPECT_TRUE(json::parse([&] {
                std::ostringstream o;
                io::write_summary(o, r.summarize(std::nullopt, 0));
                return o.str();
              }())["bound"]
                  .is_null());
}

TEST(Sweep, Parsing) {
  const auto v = commands::parse_sweep("0:0.45:0.05");
  ASSERT_EQ(v.size(), 10u);
  EXPECT_NEAR(v.back(), 0.45, 1e-15);
  EXPECT_EQ(commands::parse_sweep("0.3:0.3:0.1").size(), 1u);
  EXPECT_THROW(commands::parse_sweep("0:1"), InputError);
  EXPECT_THROW(commands::parse_sweep("0:1:0"), InputError);
  EXPECT_THROW(commands::parse_sweep("1:0:0.1"), InputError);
  EXPECT_THROW(commands::parse_sweep("a:b:c"), InputError);
}

TEST(MaterialOptions, Resolution) {
  commands::MaterialOptions m;
  EXPECT_EQ(m.resolve(Form::a).size(), 10u);
  const auto a1 = m.resolve(Form::a1);
  ASSERT_EQ(a1.size(), 1u);
  EXPECT_EQ(a1[0].material.lambda, 1.0);
  m.nu = 0.3;
  EXPECT_EQ(m.resolve(Form::a1)[0].nu, 0.3);
  m.nu.reset();
  m.lambda = 2.0;
  EXPECT_THROW(m.resolve(Form::a), InputError);
  m.mu = 3.0;
  EXPECT_EQ(m.resolve(Form::a)[0].material.mu, 3.0);
}

TEST(Commands, GammaMatrixFixtures) {
  commands::MatrixOptions o;
  o.input = kData + "/matrix_2x2.json";
  auto r = run(commands::cmd_gamma_matrix, o);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::stod(csv_rows(r.out)[0][5]), 0.25);

  o.input = kData + "/matrix_blockdiag.json";
  o.method = GammaMethod::sampling;
  o.trials = 10000;
  r = run(commands::cmd_gamma_matrix, o);
  EXPECT_EQ(r.code, 0);
  for (const auto& row : csv_rows(r.out)) EXPECT_EQ(std::stod(row[5]), 0.0);

  o.input = kData + "/matrix_random6.json";
  o.method = GammaMethod::alternating;
  r = run(commands::cmd_gamma_matrix, o);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][9], "eigen");
  EXPECT_EQ(rows[1][9], "alternating");
  EXPECT_NEAR(std::stod(rows[0][5]), std::stod(rows[1][5]), 1e-8);
}

TEST(Commands, GammaElementBoundsAndShapes) {
  commands::ElementOptions o;
  auto r = run(commands::cmd_gamma_element, o);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(csv_rows(r.out).size(), 10u);
  EXPECT_TRUE(summary_of(r.out)["bound_satisfied"].get<bool>());

  o.dim = 3;
  o.form = Form::a1;
  r = run(commands::cmd_gamma_element, o);
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(summary_of(r.out)["max_gamma2"].get<double>(), 0.9, 1e-10);

  o.form = Form::a;
  o.material.nu = 0.3;
  r = run(commands::cmd_gamma_element, o);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(summary_of(r.out)["bound"].is_null());

  commands::ElementOptions tri;
  tri.vertices = kData + "/triangle.json";
  tri.material.nu = 0.3;
  const auto from_file = run(commands::cmd_gamma_element, tri);
  tri.vertices = "0,0;1,0;0,1";
  const auto inline_v = run(commands::cmd_gamma_element, tri);
  tri.vertices = "reference";
  const auto reference = run(commands::cmd_gamma_element, tri);
  EXPECT_EQ(csv_rows(from_file.out)[0][5], csv_rows(reference.out)[0][5]);
  EXPECT_EQ(csv_rows(inline_v.out)[0][5], csv_rows(reference.out)[0][5]);

  tri.vertices = "0,0;1,0";
  EXPECT_THROW(run(commands::cmd_gamma_element, tri), InputError);
  tri.vertices = "0,0;1,0;2,0";
  EXPECT_THROW(run(commands::cmd_gamma_element, tri), InputError);
  tri.vertices = "reference";
  tri.dim = 4;
  EXPECT_EQ(run(commands::cmd_gamma_element, tri).code, 2);
}

TEST(Commands, RandomDrawsAreSeeded) {
  commands::ElementOptions o;
  o.vertices = "random";
  o.draws = 5;
  o.material.nu = 0.3;
  o.seed = 17;
  const auto a = run(commands::cmd_gamma_element, o);
  const auto b = run(commands::cmd_gamma_element, o);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(csv_rows(a.out).size(), 5u);
  o.seed = 18;
  EXPECT_NE(run(commands::cmd_gamma_element, o).out, a.out);
}

TEST(Commands, GammaMeshOrdering) {
  commands::MeshOptions o;
  o.mesh = kData + "/mesh_two_triangles.json";
  o.material.nu_sweep = "0:0.4:0.2";
  const auto r = run(commands::cmd_gamma_mesh, o);
  EXPECT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  const std::vector<std::string> cases{"e0", "e0", "e0", "e1", "e1", "e1"};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(rows[i][0], cases[i]);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(std::stod(rows[k][5]), std::stod(rows[k + 3][5]), 1e-10);
}

TEST(Commands, VerifyUsageErrors) {
  commands::VerifyOptions o;
  o.trials = 20;
  const auto r = run(commands::cmd_verify, o);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("suite strengthened: PASS"), std::string::npos);
  o.suite = "bogus";
  EXPECT_THROW(run(commands::cmd_verify, o), InputError);
  o.suite = "core";
  o.trials = 0;
  EXPECT_EQ(run(commands::cmd_verify, o).code, 2);
}
