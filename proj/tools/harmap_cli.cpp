// harmap: discrete harmonic maps from closed genus >= 2 surfaces onto
// hyperbolic target surfaces, with uniformization, cutting, tessellation
// rendering, and pull-back remeshing as separately runnable stages.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harmap/cut.hpp"
#include "harmap/harmonic.hpp"
#include "harmap/remesh.hpp"
#include "harmap/svg.hpp"
#include "harmap/synth.hpp"
#include "harmap/uniformize.hpp"

namespace fs = std::filesystem;
using namespace harmap;

namespace {

struct Config {
  std::string input;
  std::string target = "regular";
  std::string template_path;
  std::string out_dir = ".";
  double tau = 0.0;
  double eps_disp = 1e-9;
  double eps_grad = 1e-12;
  double weight_floor = 0.0;
  int max_iter = 200000;
  int seed = 0; // reserved for randomized tie-breaks; the pipeline is
                // currently deterministic regardless
  int word_len = 1;
  std::vector<double> tau_list;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file " + path.string());
  out << text;
}

fs::path ensure_out_dir(const Config& cfg) {
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ParseError("cannot create output directory " + cfg.out_dir);
  return dir;
}

struct PipelineData {
  EmbeddedMesh em;
  FlowResult flow;
  PositivityReport weights;
  std::vector<std::vector<int>> loops;
  CutSurface cut;
  FundamentalPolygon polygon;
  std::vector<int> assign;
  RepresentativeScheme scheme;
  GeodesicRealization init;
};

FundamentalPolygon resolve_target(const Config& cfg, const CutSurface& cut) {
  const std::string& t = cfg.target;
  if (t.rfind("regular", 0) == 0) {
    int g = (int)cut.segment_pairing.size() / 4;
    if (t.size() > 7) {
      if (t[7] != ':') throw ParseError("bad --target, expected regular:<g> or file:<path>");
      g = std::stoi(t.substr(8));
    }
    if (4 * g != (int)cut.segment_pairing.size())
      throw TopologyError("target genus " + std::to_string(g) +
                          " does not match the surface genus " +
                          std::to_string((int)cut.segment_pairing.size() / 4));
    return regular_polygon_with_pairing(g, cut.segment_pairing);
  }
  if (t.rfind("file:", 0) == 0) return load_polygon(t.substr(5));
  throw ParseError("bad --target, expected regular:<g> or file:<path>");
}

PipelineData run_pipeline(const Config& cfg) {
  PipelineData p;
  p.em = load_mesh(cfg.input);
  require_pipeline_input(p.em.mesh);
  p.flow = hyperbolic_yamabe_flow(p.em.mesh, induced_metric(p.em));
  p.weights = apply_positivity_policy(canonical_weights(p.em.mesh, p.flow.metric),
                                      cfg.weight_floor);
  p.loops = homology_basis(p.em.mesh);
  p.cut = cut_along(p.em.mesh, p.loops);
  p.polygon = resolve_target(cfg, p.cut);
  p.assign = match_segments_to_sides(p.cut, p.polygon);
  p.scheme = build_scheme(p.cut, p.polygon, p.assign);
  auto euc = apply_positivity_policy(
      euclidean_cotangent_weights(p.em.mesh, p.flow.metric), cfg.weight_floor);
  p.init = initialize_euclidean(p.cut, p.polygon, p.assign, euc.weights,
                                p.flow.metric);
  p.init.weights = p.weights.weights;
  return p;
}

DescentOptions options_of(const Config& cfg) {
  DescentOptions opt;
  opt.tau = cfg.tau;
  opt.eps_disp = cfg.eps_disp;
  opt.eps_grad = cfg.eps_grad;
  opt.max_iter = cfg.max_iter;
  return opt;
}

int cmd_uniformize(const Config& cfg) {
  fs::path dir = ensure_out_dir(cfg);
  EmbeddedMesh em = load_mesh(cfg.input);
  require_pipeline_input(em.mesh);
  FlowResult flow = hyperbolic_yamabe_flow(em.mesh, induced_metric(em));
  PositivityReport rep =
      apply_positivity_policy(canonical_weights(em.mesh, flow.metric), cfg.weight_floor);
  std::vector<double> K = vertex_curvature(em.mesh, flow.metric);
  write_text(dir / "uniformize.json",
             uniformize_debug_json(flow.factors.u, K, rep.weights.c));
  std::printf("uniformize ok: iterations=%d max_abs_K=%.3g area=%.9g "
              "weight_resets=%d floor=%.3g\n",
              flow.iterations, flow.max_abs_curvature,
              total_area(em.mesh, flow.metric), rep.reset_count, rep.floor);
  return 0;
}

int cmd_cut(const Config& cfg) {
  fs::path dir = ensure_out_dir(cfg);
  EmbeddedMesh em = load_mesh(cfg.input);
  require_pipeline_input(em.mesh);
  auto loops = homology_basis(em.mesh);
  CutSurface cut = cut_along(em.mesh, loops);
  FundamentalPolygon polygon = resolve_target(cfg, cut);
  auto assign = match_segments_to_sides(cut, polygon);
  write_text(dir / "cut.json", cut_to_json(loops, cut, assign));
  std::printf("cut ok: genus=%d loops=%zu base_vertex=%d boundary_segments=%zu\n",
              em.mesh.genus(), loops.size(), cut.base_vertex,
              cut.boundary_segments.size());
  return 0;
}

int cmd_harmonic(const Config& cfg) {
  fs::path dir = ensure_out_dir(cfg);
  PipelineData p = run_pipeline(cfg);
  if (!cfg.tau_list.empty()) {
    for (size_t i = 0; i < cfg.tau_list.size(); ++i) {
      Config c = cfg;
      c.tau = cfg.tau_list[i];
      DescentResult res = descend(p.init, p.scheme, options_of(c));
      std::ostringstream name;
      name << "trace_tau_" << i << ".csv";
      write_text(dir / name.str(), trace_to_csv(res.trace));
      std::printf("harmonic tau=%.9g: criterion=%s iterations=%d final_energy=%.9g\n",
                  c.tau, res.criterion.c_str(), res.iterations, res.final_energy);
    }
    return 0;
  }
  write_text(dir / "init.svg", tessellation_svg(p.init, 0));
  DescentResult res = descend(p.init, p.scheme, options_of(cfg));
  EmbeddingReport emb = check_embedding(res.realization);
  write_text(dir / "final.svg", tessellation_svg(res.realization, 0));
  write_text(dir / "trace.csv", trace_to_csv(res.trace));
  write_text(dir / "realization.json", realization_to_json(res));
  std::printf("harmonic ok: criterion=%s iterations=%d final_energy=%.9g "
              "flips=%d\n",
              res.criterion.c_str(), res.iterations, res.final_energy,
              emb.flipped_face_count);
  return 0;
}

int cmd_tessellate(const Config& cfg) {
  fs::path dir = ensure_out_dir(cfg);
  PipelineData p = run_pipeline(cfg);
  DescentResult res = descend(p.init, p.scheme, options_of(cfg));
  write_text(dir / "tessellation.svg", tessellation_svg(res.realization, cfg.word_len));
  size_t copies = enumerate_group(p.polygon, cfg.word_len).size();
  std::printf("tessellate ok: word_len=%d copies=%zu\n", cfg.word_len, copies);
  return 0;
}

int cmd_remesh(const Config& cfg) {
  fs::path dir = ensure_out_dir(cfg);
  PipelineData p = run_pipeline(cfg);
  DescentResult res = descend(p.init, p.scheme, options_of(cfg));
  TemplateMesh tmpl;
  if (cfg.template_path.empty()) {
    tmpl = realization_template(res.realization);
  } else {
    fs::path off(cfg.template_path);
    fs::path sidecar = off;
    sidecar.replace_extension(".json");
    tmpl = load_template(off.string(), sidecar.string());
  }
  CoveringAtlas atlas = build_atlas(res.realization, tmpl, cfg.word_len);
  PulledMesh pulled = pull_back(tmpl, atlas, res.realization, p.em.positions);
  EmbeddedMesh glued = glue_boundary(pulled);
  save_off((dir / "remeshed.off").string(), glued.mesh, glued.positions);
  std::printf("remesh ok: atlas_copies=%zu vertices=%d faces=%d genus=%d\n",
              atlas.copies.size(), glued.mesh.n_vertices(), glued.mesh.n_faces(),
              glued.mesh.genus());
  return 0;
}

int cmd_rate(const Config& cfg) {
  fs::path dir = ensure_out_dir(cfg);
  std::ifstream in(cfg.input);
  if (!in) throw ParseError("cannot open trace " + cfg.input);
  std::string line;
  if (!std::getline(in, line) || line.rfind("iter,energy", 0) != 0)
    throw ParseError("not a trace CSV: missing iter,energy header");
  OptimizerTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRecord rec;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf", &rec.iter, &rec.energy,
                    &rec.grad_msq, &rec.max_disp, &rec.wall_ms) < 2)
      throw ParseError("bad trace CSV row: " + line);
    trace.records.push_back(rec);
  }
  std::vector<double> rates = convergence_rate(trace, trace.records.back().energy);
  std::ostringstream csv;
  csv << "iter,ratio\n";
  for (size_t i = 0; i < rates.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", trace.records[i + 1].iter, rates[i]);
    csv << buf;
  }
  write_text(dir / "rate.csv", csv.str());
  size_t tail = std::min<size_t>(20, rates.size());
  double mean = 0.0;
  for (size_t i = rates.size() - tail; i < rates.size(); ++i) mean += rates[i];
  mean /= (double)tail;
  std::printf("rate ok: records=%zu tail_mean=%.9g\n", trace.records.size(), mean);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"discrete harmonic maps onto hyperbolic surfaces"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool with_target) {
    sub->add_option("--input", cfg.input, "input mesh (OFF/OBJ)")->required();
    if (with_target)
      sub->add_option("--target", cfg.target,
                      "target surface: regular:<g> or file:<path>");
    sub->add_option("--weight-floor", cfg.weight_floor,
                    "positivity floor for edge weights (<= 0: 5th percentile)");
    sub->add_option("--seed", cfg.seed, "seed for randomized tie-breaks");
    sub->add_option("--out-dir", cfg.out_dir, "output directory");
  };
  auto add_descent = [&](CLI::App* sub) {
    sub->add_option("--tau", cfg.tau, "step size (<= 0: automatic)");
    sub->add_option("--eps-disp", cfg.eps_disp, "max-displacement stop threshold");
    sub->add_option("--eps-grad", cfg.eps_grad, "mean-squared-gradient stop threshold");
    sub->add_option("--max-iter", cfg.max_iter, "iteration cap");
  };

  CLI::App* uniformize = app.add_subcommand("uniformize", "flat hyperbolic metric and edge weights");
  add_common(uniformize, false);

  CLI::App* cut = app.add_subcommand("cut", "homology basis and cut to a disk");
  add_common(cut, true);

  CLI::App* harmonic = app.add_subcommand("harmonic", "run the gradient descent");
  add_common(harmonic, true);
  add_descent(harmonic);
  harmonic->add_option("--tau-list", cfg.tau_list,
                       "run once per step size, writing trace_tau_<i>.csv")
      ->delimiter(',');

  CLI::App* tessellate = app.add_subcommand("tessellate", "render the image tessellation");
  add_common(tessellate, true);
  add_descent(tessellate);
  tessellate->add_option("--word-len", cfg.word_len, "group word length to render");

  CLI::App* remesh = app.add_subcommand("remesh", "pull a polygon template back to the surface");
  add_common(remesh, true);
  add_descent(remesh);
  int remesh_word_len = 4;
  remesh->add_option("--template", cfg.template_path,
                     "template OFF (JSON sidecar alongside); default: the "
                     "realization's own triangulation");
  remesh->add_option("--word-len", remesh_word_len, "atlas word-length cap");

  CLI::App* rate = app.add_subcommand("rate", "convergence ratios from a trace CSV");
  rate->add_option("--input", cfg.input, "trace CSV")->required();
  rate->add_option("--out-dir", cfg.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (uniformize->parsed()) return cmd_uniformize(cfg);
    if (cut->parsed()) return cmd_cut(cfg);
    if (harmonic->parsed()) return cmd_harmonic(cfg);
    if (tessellate->parsed()) return cmd_tessellate(cfg);
    if (remesh->parsed()) {
      cfg.word_len = remesh_word_len;
      return cmd_remesh(cfg);
    }
    if (rate->parsed()) return cmd_rate(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 2;
  } catch (const TopologyError& e) {
    std::cerr << "topology error: " << e.what() << "\n";
    return 3;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence error: " << e.what() << "\n";
    return 4;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
  return 0;
}
