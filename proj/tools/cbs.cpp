// cbs: command line driver for the strengthened CBS toolkit.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cbs/commands.hpp"

namespace {

using namespace cbs;
using namespace cbs::commands;

const std::map<std::string, Form> kForms{{"a", Form::a}, {"a1", Form::a1}, {"a2", Form::a2}};
const std::map<std::string, GammaMethod> kMethods{
    {"eigen", GammaMethod::eigen}, {"alternating", GammaMethod::alternating}, {"sampling", GammaMethod::sampling}};

void add_material(CLI::App* cmd, MaterialOptions& m) {
  auto* nu = cmd->add_option("--nu", m.nu, "Poisson ratio in [0, 0.5)");
  cmd->add_option("--E", m.young, "Young's modulus used with --nu and --nu-sweep")->check(CLI::PositiveNumber);
  auto* lam = cmd->add_option("--lambda", m.lambda, "Lame lambda");
  auto* mu = cmd->add_option("--mu", m.mu, "Lame mu");
  auto* sweep = cmd->add_option("--nu-sweep", m.nu_sweep, "inclusive sweep start:stop:step");
  nu->excludes(sweep)->excludes(lam)->excludes(mu);
  sweep->excludes(lam)->excludes(mu);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strengthened Cauchy-Bunyakowski-Schwarz constants and inequality checks"};
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "randomized invariant suites");
  verify->add_option("--suite", vo.suite, "core | weighted | integral | strengthened | all")
      ->check(CLI::IsMember({"core", "weighted", "integral", "strengthened", "all"}));
  verify->add_option("--trials", vo.trials, "trials per suite")->check(CLI::PositiveNumber);
  verify->add_option("--seed", vo.seed, "master seed");

  MatrixOptions mo;
  auto* matrix = app.add_subcommand("gamma-matrix", "gamma for a symmetric matrix and 2x2 partition");
  matrix->add_option("--input", mo.input, "JSON file {n, entries, u_indices, v_indices}")->required();
  matrix->add_option("--method", mo.method, "eigen | alternating | sampling")
      ->transform(CLI::CheckedTransformer(kMethods));
  matrix->add_option("--trials", mo.trials, "sampling budget")->check(CLI::PositiveNumber);
  matrix->add_option("--seed", mo.seed, "seed for randomized methods");
  matrix->add_option("--out", mo.out, "write OUT.csv and OUT.json");

  ElementOptions eo;
  auto* element = app.add_subcommand("gamma-element", "gamma for one element under red refinement");
  element->add_option("--dim", eo.dim, "2 or 3")->check(CLI::IsMember({2, 3}));
  element->add_option("--form", eo.form, "a | a1 | a2")->transform(CLI::CheckedTransformer(kForms));
  add_material(element, eo.material);
  element->add_option("--vertices", eo.vertices, "reference | random | 'x,y;x,y;x,y' | JSON file");
  element->add_option("--draws", eo.draws, "number of random elements")->check(CLI::PositiveNumber);
  element->add_option("--diagonal", eo.diagonal, "interior diagonal for 3D refinement")->check(CLI::Range(0, 2));
  element->add_option("--seed", eo.seed, "seed for random elements");
  element->add_option("--out", eo.out, "write OUT.csv and OUT.json");

  MeshOptions ho;
  auto* mesh = app.add_subcommand("gamma-mesh", "per-element gamma over a mesh");
  mesh->add_option("--mesh", ho.mesh, "JSON file {dim, vertices, elements}")->required();
  mesh->add_option("--form", ho.form, "a | a1 | a2")->transform(CLI::CheckedTransformer(kForms));
  add_material(mesh, ho.material);
  mesh->add_option("--diagonal", ho.diagonal, "interior diagonal for 3D refinement")->check(CLI::Range(0, 2));
  mesh->add_option("--seed", ho.seed, "recorded in the summary");
  mesh->add_option("--out", ho.out, "write OUT.csv and OUT.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(vo, std::cout, std::cerr);
    if (*matrix) return cmd_gamma_matrix(mo, std::cout, std::cerr);
    if (*element) return cmd_gamma_element(eo, std::cout, std::cerr);
    if (*mesh) return cmd_gamma_mesh(ho, std::cout, std::cerr);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  }
  return kUsage;
}
