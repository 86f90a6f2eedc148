#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shiftspec/parallel.hpp"
#include "shiftspec/plot.hpp"

namespace shiftspec::cli {

struct SpecSource {
  std::string corpus;
  std::string spec_path;
  std::string params;  // "2,1"
  std::string side;    // only the periodic construction takes a side
};

struct Resolved {
  WeightSequence weights;
  json spec;
  std::vector<double> params;
  long default_horizon;
};

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ShiftError(ErrorCode::MalformedSpec, "cannot parse number '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

inline Resolved resolve(const SpecSource& src) {
  if (src.corpus.empty() == src.spec_path.empty())
    throw ShiftError(ErrorCode::MalformedSpec, "give exactly one of --corpus and --spec");
  if (!src.spec_path.empty()) {
    if (!src.params.empty() || !src.side.empty())
      throw ShiftError(ErrorCode::MalformedSpec, "--params and --side apply to corpus entries only");
    json spec = read_json_file(src.spec_path);
    return {weight_spec_from_json(spec), spec, {}, 4096};
  }
  const CorpusEntry* entry = nullptr;
  for (const auto& e : list_corpus())
    if (e.id == src.corpus) entry = &e;
  if (!entry) throw ShiftError(ErrorCode::UnknownConstruction, "no corpus entry '" + src.corpus + "'");
  auto values = src.params.empty() ? std::vector<double>{} : parse_list(src.params);
  auto params = values.empty() ? entry->default_params : positional_params(entry->id, values);
  if (!src.side.empty()) {
    Side s = io::side_from_string(src.side);
    if (entry->id == "periodic")
      params["bilateral"] = s == Side::Bilateral ? 1.0 : 0.0;
    else if (s != entry->make().side())
      throw ShiftError(ErrorCode::MalformedSpec, "corpus entry '" + entry->id + "' is " + to_string(entry->make().side()));
  }
  auto w = entry->make(params);
  return {w, weight_spec_to_json(w), values, entry->default_horizon};
}

inline void apply_tolerance(Tolerance& t, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos) throw ShiftError(ErrorCode::MalformedSpec, "--tol takes key=value, got '" + o + "'");
    std::string key = o.substr(0, eq);
    auto v = parse_list(o.substr(eq + 1));
    if (v.size() != 1) throw ShiftError(ErrorCode::MalformedSpec, "--tol " + key + " needs one number");
    if (key == "tau_floor") t.tau_floor = v[0];
    else if (key == "spread_factor") t.spread_factor = v[0];
    else if (key == "max_rel_spread") t.max_rel_spread = v[0];
    else if (key == "zero_tol") t.zero_tol = v[0];
    else if (key == "nonzero_tol") t.nonzero_tol = v[0];
    else throw ShiftError(ErrorCode::MalformedSpec, "unknown tolerance '" + key + "'");
  }
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ShiftError(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

// "0.5,2:40": circles of radius 0.5 and 2 with 40 equally spaced points each.
inline std::vector<cplx> parse_grid(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ShiftError(ErrorCode::MalformedSpec, "--grid takes radii:points, e.g. 0.5,2:40");
  auto radii = parse_list(text.substr(0, colon));
  auto count = parse_list(text.substr(colon + 1));
  if (radii.empty() || count.size() != 1 || count[0] < 1 || count[0] != std::floor(count[0]))
    throw ShiftError(ErrorCode::MalformedSpec, "bad --grid '" + text + "'");
  std::vector<cplx> out;
  long m = static_cast<long>(count[0]);
  for (double r : radii)
    for (long k = 0; k < m; ++k) out.push_back(std::polar(r, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m)));
  return out;
}

inline std::vector<MembershipVerdict> sweep(const BetaCache& beta, const VectorSpec& x, const std::vector<cplx>& grid, long n_max) {
  std::vector<MembershipVerdict> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = resolvent_recurrence(beta, x, grid[i], n_max); });
  return out;
}

inline std::string sweep_csv(const std::vector<MembershipVerdict>& s) {
  std::ostringstream os;
  os.precision(17);
  os << "re,im,modulus,decision,log_ratio\n";
  for (const auto& v : s)
    os << v.lambda.real() << ',' << v.lambda.imag() << ',' << std::abs(v.lambda) << ',' << to_string(v.decision) << ','
       << v.log_ratio << '\n';
  return os.str();
}

inline BetaCache cache_for(const WeightSequence& w, long h) {
  return w.side() == Side::Bilateral ? build_beta(w, h, h) : build_beta(w, h);
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Spectral radii, local spectra and spectral-property verdicts for weighted shifts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SpecSource src;
  long horizon = 0;
  std::vector<std::string> tol_overrides;
  std::string out_path;
  auto add_source = [&](CLI::App* c) {
    c->add_option("--corpus", src.corpus, "corpus entry id");
    c->add_option("--spec", src.spec_path, "weight-spec JSON file");
    c->add_option("--params", src.params, "comma-separated corpus parameters, e.g. 2,1");
    c->add_option("--side", src.side, "unilateral or bilateral (periodic entry only)");
    c->add_option("--horizon", horizon, "beta horizon; default depends on the entry");
    c->add_option("--tol", tol_overrides, "tolerance override key=value (repeatable)");
    c->add_option("--out", out_path, "output file; stdout when omitted");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "radii, spectra and verdicts as a JSON report");
  add_source(analyze_cmd);
  bool verify = false, estimate_only = false;
  std::vector<std::string> vectors;
  analyze_cmd->add_flag("--verify", verify, "run oracle cross-checks");
  analyze_cmd->add_flag("--estimate-only", estimate_only, "skip exact evaluators and use the generic estimators");
  analyze_cmd->add_option("--vector", vectors, "also report the local spectrum of this vector (repeatable)");

  auto* local_cmd = app.add_subcommand("local", "local spectrum of one vector");
  add_source(local_cmd);
  std::string vector_text, grid_text, sweep_path;
  local_cmd->add_option("--vector", vector_text, "e0, e0+e1, 2*e-1, geometric:0.5 or a JSON file")->required();
  local_cmd->add_option("--grid", grid_text, "membership sweep radii:points, e.g. 0.5,2:40");
  local_cmd->add_option("--sweep-csv", sweep_path, "write the sweep as CSV here");

  auto* plot_cmd = app.add_subcommand("plot", "SVG of the region sets and CSV of the estimator traces");
  std::string report_path, svg_path, csv_path;
  plot_cmd->add_option("report", report_path, "analysis report JSON")->required();
  plot_cmd->add_option("--svg", svg_path, "SVG output; default <report>.svg");
  plot_cmd->add_option("--csv", csv_path, "trace CSV output; default <report>.traces.csv");

  auto* corpus_cmd = app.add_subcommand("corpus", "list corpus entries or export one as a weight spec");
  std::string export_id, export_params;
  corpus_cmd->add_option("--export", export_id, "entry id to export");
  corpus_cmd->add_option("--params", export_params, "comma-separated parameters for the export");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    auto load_vector = [](const std::string& text) {
      if (text.size() > 5 && text.substr(text.size() - 5) == ".json") return vector_from_json(read_json_file(text));
      return parse_vector(text);
    };

    if (*analyze_cmd) {
      auto r = resolve(src);
      AnalysisInput in;
      in.spec = r.spec;
      in.corpus_id = src.corpus;
      in.params = r.params;
      in.horizon = horizon > 0 ? horizon : r.default_horizon;
      apply_tolerance(in.tol, tol_overrides);
      in.verify = verify;
      in.estimate_only = estimate_only;
      auto rep = analyze(r.weights, in);
      if (!vectors.empty()) {
        auto beta = cache_for(r.weights, rep.input.horizon);
        for (const auto& v : vectors) {
          auto x = load_vector(v);
          rep.local.push_back({describe_vector(x), vector_to_json(x), local_spectrum(rep.radii, beta, x, rep.input.tol)});
        }
      }
      write_text(out_path, to_json(rep).dump(2) + "\n", out);
      return 0;
    }

    if (*local_cmd) {
      auto r = resolve(src);
      long h = horizon > 0 ? horizon : r.default_horizon;
      Tolerance tol;
      apply_tolerance(tol, tol_overrides);
      auto x = load_vector(vector_text);
      auto beta = cache_for(r.weights, h);
      auto radii = compute_radii(r.weights, beta);
      auto rep = local_spectrum(radii, beta, x, tol);
      json j;
      j["schema"] = kSchemaVersion;
      j["version"] = kVersion;
      j["input"] = json{{"spec", r.spec}, {"vector", vector_to_json(x)}, {"horizon", h}, {"tolerance", to_json(tol)}};
      j["vector"] = describe_vector(x);
      j["report"] = to_json(rep);
      if (!grid_text.empty()) {
        auto s = sweep(beta, x, parse_grid(grid_text), h);
        json a = json::array();
        for (const auto& v : s) a.push_back(to_json(v));
        j["sweep"] = a;
        if (!sweep_path.empty()) write_text(sweep_path, sweep_csv(s), out);
      }
      write_text(out_path, j.dump(2) + "\n", out);
      return 0;
    }

    if (*plot_cmd) {
      AnalysisReport rep;
      try {
        rep = analysis_from_json(read_json_file(report_path));
      } catch (const nlohmann::json::exception& e) {
        throw ShiftError(ErrorCode::MalformedSpec, std::string("malformed report: ") + e.what());
      }
      write_text(svg_path.empty() ? report_path + ".svg" : svg_path, render_svg(report_panels(rep)), out);
      write_text(csv_path.empty() ? report_path + ".traces.csv" : csv_path, render_traces_csv(rep.traces), out);
      return 0;
    }

    if (*corpus_cmd) {
      if (export_id.empty()) {
        for (const auto& e : list_corpus()) out << e.id << "\t" << to_string(e.make().side()) << "\t" << e.description << "\n";
        return 0;
      }
      auto r = resolve({export_id, "", export_params, ""});
      out << r.spec.dump(2) << "\n";
      return 0;
    }
  } catch (const ShiftError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 5;
}

}  // namespace shiftspec::cli
