#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gvfls/config.hpp"
#include "gvfls/contour.hpp"
#include "gvfls/diagnostics.hpp"
#include "gvfls/distance.hpp"
#include "gvfls/edge_map.hpp"
#include "gvfls/gvf.hpp"
#include "gvfls/io.hpp"
#include "gvfls/parallel.hpp"
#include "gvfls/segment.hpp"
#include "gvfls/synth.hpp"

namespace gvfls {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNotConverged = 2,
  kExitIo = 3,
};

namespace cli_detail {

namespace fs = std::filesystem;

inline ScalarField load_image(const std::string& path, double spacing) {
  if (path.empty()) throw ValidationError("io.input is required");
  if (!fs::exists(path)) throw IoError(IoErrorKind::open_failed, path);
  if (fs::path(path).extension() == ".field") {
    auto f = read_field(path);
    return ScalarField(GridSpec{f.width(), f.height(), spacing}, std::move(f.values()));
  }
  return read_pgm(path, spacing);
}

inline fs::path prepare_output(const SegmentationConfig& cfg) {
  fs::path out = cfg.io.output;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError(IoErrorKind::open_failed, out, ec.message());
  write_config(cfg, out / "effective.conf");
  return out;
}

inline void write_energy_csv(const std::vector<EnergySample>& trace, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(IoErrorKind::open_failed, path);
  out << "step,energy\n";
  char buf[64];
  for (const auto& s : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", s.step, s.energy);
    out << buf;
  }
  if (!out) throw IoError(IoErrorKind::write_failed, path);
}

inline void write_gvf_fields(const GvfResult& r, const fs::path& out) {
  write_field(r.V.u, out / "gvf_u.field");
  write_field(r.V.v, out / "gvf_v.field");
  write_field(r.V_hat.u, out / "gvf_uhat.field");
  write_field(r.V_hat.v, out / "gvf_vhat.field");
  write_energy_csv(r.energy_trace, out / "energy.csv");
}

inline LevelSetState initial_state(const SegmentationConfig& cfg, const GridSpec& grid) {
  if (cfg.init.kind == "mask") {
    auto mask = load_image(cfg.init.mask, grid.spacing);
    require_same_grid(mask.grid(), grid, "init.mask vs input image");
    for (double& v : mask.values()) v = v != 0.0 ? 1.0 : 0.0;
    return {signed_distance_from_mask(mask), 0, 0.0};
  }
  const double cx = cfg.init.cx >= 0.0 ? cfg.init.cx : 0.5 * double(grid.width - 1) * grid.spacing;
  const double cy = cfg.init.cy >= 0.0 ? cfg.init.cy : 0.5 * double(grid.height - 1) * grid.spacing;
  const double r = cfg.init.radius > 0.0 ? cfg.init.radius
                                         : 0.47 * double(std::min(grid.width, grid.height)) * grid.spacing;
  return {signed_distance_circle(grid, cx, cy, r), 0, 0.0};
}

inline int cmd_synth(const SegmentationConfig& cfg) {
  auto shape = cfg.synth;
  shape.seed = cfg.seed;
  const auto synth = synthesize(shape, cfg.grid);
  const auto out = prepare_output(cfg);
  write_pgm(synth.image, out / "image.pgm");
  write_field(synth.image, out / "image.field");
  write_contours_csv(synth.truth, out / "ground_truth.csv");
  std::cout << "wrote " << (out / "image.pgm").string() << " and ground_truth.csv\n";
  return kExitOk;
}

inline int cmd_gvf(const SegmentationConfig& cfg) {
  const auto image = load_image(cfg.io.input, cfg.grid.spacing);
  const auto maps = build_edge_maps(image, cfg.edge);
  const auto res = solve_gvf(maps, cfg.gvf);
  const auto out = prepare_output(cfg);
  write_field(maps.f, out / "edge_f.field");
  write_gvf_fields(res, out);
  std::cout << "gvf: " << res.steps_taken << " steps, residual " << res.final_residual
            << (res.converged ? "" : " (not converged)") << "\n";
  return res.converged ? kExitOk : kExitNotConverged;
}

inline int cmd_segment(const SegmentationConfig& cfg) {
  const auto image = load_image(cfg.io.input, cfg.grid.spacing);
  const auto init = initial_state(cfg, image.grid());
  const auto out = prepare_output(cfg);
  const int stride = cfg.io.snapshot_stride;
  write_field(init.phi, out / "phi_000000.field");
  const auto res = segment(image, init, cfg.edge, cfg.gvf, cfg.levelset, [&](const LevelSetState& s) {
    if (stride > 0 && s.step % stride == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "phi_%06d.field", s.step);
      write_field(s.phi, out / name);
    }
  });
  write_gvf_fields(res.gvf, out);
  write_field(res.state.phi, out / "phi_final.field");
  write_contours_csv(res.contours, out / "contours.csv");
  std::cout << "segment: " << res.state.step << " level-set steps, " << res.contours.polylines.size()
            << " contour(s)" << (res.converged ? "" : " (not converged)") << "\n";
  return res.converged ? kExitOk : kExitNotConverged;
}

inline int cmd_diagnose(const SegmentationConfig& cfg) {
  const auto out = prepare_output(cfg);
  std::vector<SuiteReport> reports{properness_suite(cfg.seed, cfg.diagnose_draws),
                                   direction_lemma_suite(cfg.seed + 1, cfg.diagnose_draws),
                                   projection_suite(cfg.seed + 2, std::max(1L, cfg.diagnose_draws / 10))};

  struct Lipschitz {
    std::string source;
    double constant;
  };
  std::vector<Lipschitz> lips;
  for (auto shape : {disk_fixture(), u_shape_fixture()}) {
    const auto img = synthesize(shape, cfg.grid);
    lips.push_back({std::string("synthetic_") + to_string(shape.kind),
                    sqrt_g_lipschitz_estimate(build_edge_maps(img.image, cfg.edge).g_tilde)});
  }
  if (!cfg.io.input.empty()) {
    const auto img = load_image(cfg.io.input, cfg.grid.spacing);
    lips.push_back({cfg.io.input, sqrt_g_lipschitz_estimate(build_edge_maps(img, cfg.edge).g_tilde)});
  }

  const auto path = out / "diagnostics.csv";
  std::ofstream csv(path, std::ios::trunc);
  if (!csv) throw IoError(IoErrorKind::open_failed, path);
  csv << "check,draws,failures,measured,status\n";
  bool ok = true;
  char buf[256];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%ld,%ld,%.6e,%s\n", r.name.c_str(), r.draws, r.failures, r.worst,
                  r.passed() ? "pass" : "fail");
    csv << buf;
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.failures << "/" << r.draws
              << " failures, worst " << r.worst << "\n";
    ok = ok && r.passed();
  }
  for (const auto& l : lips) {
    const bool finite = std::isfinite(l.constant);
    std::snprintf(buf, sizeof buf, "lipschitz_sqrt_g[%s],0,%d,%.6e,%s\n", l.source.c_str(), finite ? 0 : 1,
                  l.constant, finite ? "pass" : "fail");
    csv << buf;
    std::cout << (finite ? "PASS " : "FAIL ") << "lipschitz sqrt(g) on " << l.source << ": " << l.constant << "\n";
    ok = ok && finite;
  }
  if (!csv) throw IoError(IoErrorKind::write_failed, path);
  return ok ? kExitOk : kExitValidation;
}

}  // namespace cli_detail

/// Entry point of the command-line tool:
///   gvfls synth|gvf|segment|diagnose [--config <path>] [--set key=value ...] [--out <dir>] [--seed <n>]
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Gradient vector flow and GVF-geodesic level-set segmentation"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> sets;
  long long seed = -1;
  int threads = -1;
  std::vector<CLI::App*> subs;
  for (const char* name : {"synth", "gvf", "segment", "diagnose"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "flat key = value configuration file");
    sub->add_option("--set", sets, "override a configuration key (key=value)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for synthetic noise and randomized diagnostics");
    sub->add_option("--threads", threads, "worker threads for row-parallel stencils (0 = all cores)");
    subs.push_back(sub);
  }
  subs[0]->description("write a synthetic image and its ground-truth outline");
  subs[1]->description("compute the gradient vector flow of an image");
  subs[2]->description("segment an image with the GVF-geodesic level-set flow");
  subs[3]->description("check the Hamiltonian's structural properties numerically");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    SegmentationConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& s : sets) apply_assignment(cfg, s);
    if (!out_dir.empty()) cfg.io.output = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
    cfg.validate();
    set_thread_count(cfg.threads);

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "synth") return cli_detail::cmd_synth(cfg);
    if (cmd == "gvf") return cli_detail::cmd_gvf(cfg);
    if (cmd == "segment") return cli_detail::cmd_segment(cfg);
    return cli_detail::cmd_diagnose(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CflError& e) {
    std::cerr << "stability error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace gvfls
