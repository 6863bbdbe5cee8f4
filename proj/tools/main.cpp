// Command-line front end for striped-model analysis: validation, leaf-space
// inspection, trivializing atlas construction and verification, doubling, and
// format export.  All output is deterministic for fixed inputs and flags.
//
// Exit codes: 0 success, 1 validation failure, 2 verification failure,
// 3 I/O or parse error.

#include "stripfold/chart.hpp"
#include "stripfold/leafspace.hpp"
#include "stripfold/numeric.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace stripfold;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

// Parse + validate; on validation failure prints the issues and leaves the
// caller to exit with the validation status.
StripModel parse_input_model(const std::string& path) {
  return parse_model(read_input(path));
}

int report_invalid(const ValidationReport& rep) {
  for (const ValidationIssue& i : rep.issues) std::cerr << i.code << ": " << i.message << "\n";
  return kExitInvalid;
}

std::string leaf_of_vertex(const StripModel& m, const LeafVertex& v) {
  if (v.kind == VertexKind::Arc) return leaf_to_string(m, ArcLeaf{v.gluing});
  return leaf_to_string(m, BoundaryLeaf{v.strip, v.side});
}

ordered_json certified_json(const Certified& c) {
  return ordered_json{{"value", c.value}, {"certificate", c.certificate}};
}

int run_validate(const std::string& input) {
  StripModel m = parse_input_model(input);
  ValidationReport rep = validate_model(m);
  if (!rep.ok()) {
    for (const ValidationIssue& i : rep.issues) std::cout << i.code << ": " << i.message << "\n";
    return kExitInvalid;
  }
  std::cout << "ok\n";
  return kExitOk;
}

int run_analyze(const std::string& input, const std::string& format) {
  StripModel m = parse_input_model(input);
  ValidationReport rep = validate_model(m);
  if (!rep.ok()) return report_invalid(rep);

  LeafSpaceGraph g = build_leaf_space(m);
  HypothesisReport hyp = hypothesis_report(m, g);
  std::vector<int> special = special_points(g);

  if (format == "json") {
    ordered_json j;
    j["strips"] = m.strips.size();
    j["gluings"] = m.gluings.size();
    j["vertices"] = g.vertices.size();
    j["hausdorff"] = hyp.hausdorff;
    j["special_points"] = ordered_json::array();
    for (int v : special)
      j["special_points"].push_back(
          ordered_json{{"vertex", v}, {"leaf", leaf_of_vertex(m, g.vertices[v])}});
    j["hypotheses"] = ordered_json{
        {"all_leaves_noncompact", certified_json(hyp.all_leaves_noncompact)},
        {"special_family_locally_finite", certified_json(hyp.special_family_locally_finite)},
        {"t1", certified_json(hyp.t1)},
        {"locally_euclidean", certified_json(hyp.locally_euclidean)},
    };
    j["fibration_hypotheses_hold"] = hyp.ok();
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }

  std::cout << "strips: " << m.strips.size() << "\n";
  std::cout << "gluings: " << m.gluings.size() << "\n";
  std::cout << "leaf space vertices: " << g.vertices.size() << "\n";
  std::cout << "hausdorff: " << (hyp.hausdorff ? "true" : "false") << "\n";
  std::cout << "special points: " << special.size() << "\n";
  for (int v : special)
    std::cout << "  special vertex " << v << ": " << leaf_of_vertex(m, g.vertices[v]) << "\n";
  auto line = [](const char* name, const Certified& c) {
    std::cout << name << ": " << (c.value ? "true" : "false") << " — " << c.certificate << "\n";
  };
  line("all leaves noncompact", hyp.all_leaves_noncompact);
  line("special family locally finite", hyp.special_family_locally_finite);
  line("leaf space T1", hyp.t1);
  line("leaf space locally euclidean", hyp.locally_euclidean);
  std::cout << "fibration hypotheses hold: " << (hyp.ok() ? "true" : "false") << "\n";
  return kExitOk;
}

int run_leafspace(const std::string& input, const std::string& format, const std::string& output) {
  StripModel m = parse_input_model(input);
  ValidationReport rep = validate_model(m);
  if (!rep.ok()) return report_invalid(rep);
  write_output(output, export_graph(build_leaf_space(m), format));
  return kExitOk;
}

int run_trivialize(const std::string& input, const std::string& collar, const std::string& spacing,
                   const std::string& output) {
  StripModel m = parse_input_model(input);
  ValidationReport rep = validate_model(m);
  if (!rep.ok()) return report_invalid(rep);
  Rat eps = collar.empty() ? m.default_collar() : parse_rational(collar);
  Rat step = spacing.empty() ? Rat(1) : parse_rational(spacing);
  TrivAtlas atlas = build_atlas(m, eps, step);
  write_output(output, atlas_to_json(m, atlas));
  return kExitOk;
}

int run_verify(const std::string& input, int grid, int transitions, int numeric_grid, double tol,
               const std::string& format) {
  auto [m, atlas] = atlas_from_json(read_input(input));
  ValidationReport rep = validate_model(m);
  if (!rep.ok()) return report_invalid(rep);

  GridReport report = verify_atlas(m, atlas, grid, transitions);
  if (numeric_grid > 0)
    for (size_t i = 0; i < atlas.charts.size(); ++i) {
      GridReport numeric =
          check_fibered_homeo(numeric_view(atlas.charts[i]), numeric_grid, tol);
      for (CheckResult& c : numeric.checks) {
        c.name = "chart" + std::to_string(i) + " numeric: " + c.name;
        report.checks.push_back(std::move(c));
      }
    }

  if (format == "json")
    std::cout << report.to_json() << "\n";
  else
    std::cout << report.summary();
  return report.pass() ? kExitOk : kExitVerifyFailed;
}

int run_double(const std::string& input, const std::string& output) {
  StripModel m = parse_input_model(input);
  ValidationReport rep = validate_model(m);
  if (!rep.ok()) return report_invalid(rep);
  DoubledModel d = double_model(m);
  write_output(output, model_to_text(d.model));
  return kExitOk;
}

int run_export(const std::string& input, const std::string& format, const std::string& output) {
  StripModel m = parse_input_model(input);
  ValidationReport rep = validate_model(m);
  if (!rep.ok()) return report_invalid(rep);
  if (format == "text") {
    write_output(output, model_to_text(m));
    return kExitOk;
  }
  write_output(output, export_graph(build_leaf_space(m), format));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"striped-model foliation analyzer"};
  app.require_subcommand(1);

  std::string input, output;
  std::string analyze_format = "text", leafspace_format = "json", verify_format = "text",
              export_format = "text";
  int grid = 101, transitions = 7, numeric_grid = 0;
  double tol = 1e-9;
  std::string collar, spacing;

  CLI::App* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("input", input, "model file, or - for stdin")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "leaf space summary and hypothesis checks");
  analyze->add_option("input", input)->required();
  analyze->add_option("--format", analyze_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* leafspace = app.add_subcommand("leafspace", "export the leaf space graph");
  leafspace->add_option("input", input)->required();
  leafspace->add_option("--format", leafspace_format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}));
  leafspace->add_option("-o,--output", output, "output file (default stdout)");

  CLI::App* trivialize = app.add_subcommand("trivialize", "build a trivializing atlas as JSON");
  trivialize->add_option("input", input)->required();
  trivialize->add_option("--collar", collar, "tube half-width (rational; default from the model)");
  trivialize->add_option("--spacing", spacing, "parallel section spacing (rational; default 1)");
  trivialize->add_option("-o,--output", output, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "verify an atlas JSON (exit 2 on failure)");
  verify->add_option("input", input, "atlas file, or - for stdin")->required();
  verify->add_option("--grid", grid, "verification grid resolution")->check(CLI::Range(2, 2001));
  verify->add_option("--transitions", transitions, "transition sample resolution")
      ->check(CLI::Range(2, 201));
  verify->add_option("--numeric-grid", numeric_grid,
                     "also run the floating harness at this resolution (0 = off)")
      ->check(CLI::Range(0, 2001));
  verify->add_option("--tol", tol, "residual tolerance for the floating harness");
  verify->add_option("--format", verify_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* dbl = app.add_subcommand("double", "double the model along its boundary");
  dbl->add_option("input", input)->required();
  dbl->add_option("-o,--output", output, "output file (default stdout)");

  CLI::App* exp = app.add_subcommand("export", "convert a model to text, json, or dot");
  exp->add_option("input", input)->required();
  exp->add_option("--format", export_format, "text, json, or dot")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  exp->add_option("-o,--output", output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  try {
    if (validate->parsed()) return run_validate(input);
    if (analyze->parsed()) return run_analyze(input, analyze_format);
    if (leafspace->parsed()) return run_leafspace(input, leafspace_format, output);
    if (trivialize->parsed()) return run_trivialize(input, collar, spacing, output);
    if (verify->parsed())
      return run_verify(input, grid, transitions, numeric_grid, tol, verify_format);
    if (dbl->parsed()) return run_double(input, output);
    if (exp->parsed()) return run_export(input, export_format, output);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}
