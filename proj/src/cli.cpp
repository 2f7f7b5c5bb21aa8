#include "flexlab/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flexlab/flexlab.hpp"

namespace flexlab::cli {

double default_tolerance() {
  const char* env = std::getenv("FLEXLAB_TOL");
  if (!env || !*env) return kDefaultTol;
  char* end = nullptr;
  double v = std::strtod(env, &end);
  if (end == env || *end || !(v > 0)) throw UsageError(std::string("FLEXLAB_TOL is not a positive number: ") + env);
  return v;
}

namespace {

struct IoError : Error {
  using Error::Error;
};

Framework read_framework(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return framework_from_json(j);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << text;
}

Point anchor(GeometryKind kind, const std::vector<double>& v) {
  return from_model(kind, canonical_model(kind), v);
}

std::vector<bool> flags(const std::vector<int>& v, std::size_t n) {
  std::vector<bool> out(n, false);
  for (int k : v) {
    if (k < 0 || static_cast<std::size_t>(k) >= n) throw UsageError("flip index out of range");
    out[static_cast<std::size_t>(k)] = true;
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flexibility of bipartite bar-joint frameworks in E2, H2 and S2", "flexlab"};
  app.require_subcommand(1);
  double tol = 0;
  app.add_option("--tol", tol, "tolerance for geometric predicates (default 1e-9 or FLEXLAB_TOL)")
      ->check(CLI::PositiveNumber);

  std::string input, out_path, format;

  auto* analyze = app.add_subcommand("analyze", "classify a framework");
  analyze->add_option("file", input, "framework JSON")->required();
  analyze->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  analyze->add_option("--out", out_path, "output file");

  auto* dof = app.add_subcommand("dof", "rigidity matrix rank and infinitesimal degrees of freedom");
  dof->add_option("file", input, "framework JSON")->required();
  dof->add_option("--out", out_path, "output file");

  int steps = 400;
  double step = 0.01;
  auto* trace = app.add_subcommand("trace", "trace a flex numerically");
  trace->add_option("file", input, "framework JSON")->required();
  trace->add_option("--steps", steps, "frames per direction")->check(CLI::PositiveNumber);
  trace->add_option("--step", step, "driver increment in radians")->check(CLI::Range(1e-12, 3.14159));
  trace->add_option("--out", out_path, "motion output file");
  trace->add_option("--format", format, "svg or json")->check(CLI::IsMember({"svg", "json"}));

  auto* gen = app.add_subcommand("generate", "write a flexible framework");
  gen->require_subcommand(1);
  std::string geometry = "euclidean";
  std::vector<double> xs{1, 2, 3}, ys{1, 2, 3}, pa, qa;
  std::vector<int> psel{1, 2, 3}, qsel{1, 2, 3}, pflip, qflip;
  double theta = 1.0, phi1 = 0.4, seed = 1;
  auto* g1 = gen->add_subcommand("dixon1", "parts on two orthogonal geodesics");
  g1->add_option("--geometry", geometry)->check(CLI::IsMember({"euclidean", "hyperbolic", "spherical"}));
  g1->add_option("--xs", xs, "signed positions of p_i along the first axis")->delimiter(',');
  g1->add_option("--ys", ys, "signed positions of q_j along the second axis")->delimiter(',');
  g1->add_option("--out", out_path);
  auto* g2 = gen->add_subcommand("dixon2", "parts on two rectangles with common symmetry axes");
  g2->add_option("--geometry", geometry)->check(CLI::IsMember({"euclidean", "hyperbolic", "spherical"}));
  g2->add_option("--p-anchor", pa, "anchor in canonical model coordinates")->delimiter(',')->required();
  g2->add_option("--q-anchor", qa, "anchor in canonical model coordinates")->delimiter(',')->required();
  g2->add_option("--p-select", psel, "orbit indices 1..4")->delimiter(',');
  g2->add_option("--q-select", qsel, "orbit indices 1..4")->delimiter(',');
  g2->add_option("--flip-p", pflip, "0-based p joints to send to their antipodes (S2)")->delimiter(',');
  g2->add_option("--flip-q", qflip, "0-based q joints to send to their antipodes (S2)")->delimiter(',');
  g2->add_option("--out", out_path);
  auto* g3 = gen->add_subcommand("cda", "spherical constant diagonal angle framework");
  g3->add_option("--theta", theta, "angle of q_0 from p_0");
  g3->add_option("--phi1", phi1, "angle of p_1 on its great circle");
  g3->add_option("--seed", seed, "Newton start");
  g3->add_option("--out", out_path);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "machine-check the symbolic identities");
  verify->add_option("--suite", suite)->check(CLI::IsMember({"euclidean", "hyperbolic", "spherical", "all"}));
  verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "flexlab: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (tol == 0) tol = default_tolerance();
    if (*analyze) {
      auto c = classify(read_framework(input), tol);
      if (format == "text") {
        std::ostringstream s;
        s << "kind: " << to_string(c.kind) << "\nflexible: " << (c.flexible ? "true" : "false")
          << "\ndof: " << c.internal_dof_claim << "\nd1_lengths: " << c.d1_lengths << "\nd2_lengths: " << c.d2_lengths
          << "\n";
        emit(s.str(), out_path, out);
      } else {
        emit(c.to_json().dump(2) + "\n", out_path, out);
      }
      return kOk;
    }
    if (*dof) {
      auto fw = read_framework(input);
      auto r = rigidity_report(fw, tol);
      auto j = r.to_json();
      j["classified_dof"] = classify(fw, tol).internal_dof_claim;
      emit(j.dump(2) + "\n", out_path, out);
      return kOk;
    }
    if (*trace) {
      TraceOptions opt;
      opt.steps = steps;
      opt.step = step;
      opt.tol = tol;
      auto res = trace_flex(read_framework(input), opt);
      nlohmann::json summary = {{"result", res.jammed ? "Jammed" : "FlexPath"},
                                {"frames", res.path.frames.size()},
                                {"fixed", {res.path.fixed_p, res.path.fixed_q}},
                                {"closure", to_string(res.path.closure)},
                                {"max_length_drift", res.path.max_length_drift}};
      if (!res.note.empty()) summary["note"] = res.note;
      out << summary.dump(2) << "\n";
      if (!out_path.empty()) {
        // Without --format, an .svg file name picks SVG.
        bool svg = format == "svg" || (format.empty() && out_path.ends_with(".svg"));
        emit(export_motion(res.path, svg ? MotionFormat::Svg : MotionFormat::Json), out_path, out);
      }
      return kOk;
    }
    if (*gen) {
      GeometryKind kind = parse_geometry(geometry);
      Framework fw;
      if (*g1) {
        fw = generate_dixon1(kind, xs, ys);
      } else if (*g2) {
        FlipRecord flips;
        if (!pflip.empty() || !qflip.empty()) flips = {flags(pflip, psel.size()), flags(qflip, qsel.size())};
        fw = generate_dixon2(kind, anchor(kind, pa), anchor(kind, qa), psel, qsel, flips);
      } else {
        fw = generate_cda(theta, phi1, seed).fw;
      }
      emit(to_json(fw).dump(2) + "\n", out_path, out);
      return kOk;
    }
    if (*verify) {
      poly::VerifyReport rep;
      if (suite == "all")
        rep = poly::verify_all();
      else
        rep = poly::verify_suite(parse_geometry(suite));
      out << (format == "json" ? rep.json().dump(2) + "\n" : rep.text());
      return rep.passed() ? kOk : kIdentityFailure;
    }
  } catch (const IdentityViolation& e) {
    err << "flexlab: identity violation: " << e.what() << "\n";
    return kIdentityFailure;
  } catch (const Error& e) {
    err << "flexlab: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "flexlab: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace flexlab::cli
