// tmrf: build a grid MRF from images (or a serialized model), minimize it with
// tiered moves or ICM, and write the label map, energy trace and run record.
//
// Exit status: 0 converged, 2 move budget exhausted, 1 error.

#include <omp.h>

#include <CLI11.hpp>
#include <iostream>

#include "tiered/benchmark_run.hpp"

int main(int argc, char** argv) {
  using namespace tiered;

  CLI::App app{"Tiered move making on grid MRFs"};
  app.set_config("--config", "", "key=value config file; command-line flags override it");

  ProblemSpec spec;
  std::string family = "raw";
  std::string solver = "tmove1";
  std::string kernel = "fast";
  std::string out_dir;
  std::string write_model;
  std::uint64_t seed = 0;
  int max_moves = 1000;
  double epsilon = 0.0;
  int threads = 0;
  bool no_timing = false;
  std::vector<std::string> inputs;
  std::vector<std::string> masks;
  std::string left, right, fg, bg;

  app.add_option("--family", family, "stereo|denoise|segment|stitch|raw|worst-case")->capture_default_str();
  app.add_option("--left", left, "stereo left image");
  app.add_option("--right", right, "stereo right image");
  app.add_option("--input", inputs, "input image(s); model container for raw; several for stitch");
  app.add_option("--mask", masks, "stitch validity masks, one per --input");
  app.add_option("--fg", fg, "segment foreground cost map");
  app.add_option("--bg", bg, "segment background cost map");
  app.add_option("--labels", spec.labels, "disparities (stereo) or grey levels (denoise)")->capture_default_str();
  app.add_option("--lambda", spec.lambda, "denoise smoothness weight")->capture_default_str();
  app.add_option("--potts-v", spec.potts_v, "Potts penalty")->capture_default_str();
  app.add_option("--beta", spec.beta, "segment contrast parameter")->capture_default_str();
  app.add_option("--pairwise", spec.pairwise,
                 "stereo pairwise family: potts|linear|quadratic|truncated-linear|truncated-quadratic")
      ->capture_default_str();
  app.add_option("--weight", spec.weight, "stereo pairwise weight")->capture_default_str();
  app.add_option("--trunc", spec.truncation, "stereo pairwise truncation")->capture_default_str();
  app.add_option("--data-trunc", spec.data_truncation, "stereo unary truncation")->capture_default_str();
  app.add_option("--q", spec.q, "worst-case instance parameter Q > 1")->capture_default_str();
  app.add_option("--solver", solver, "tmove1|tmove2|icm")->capture_default_str();
  app.add_option("--init", spec.init, "argmin|random|uniform:<label>")->capture_default_str();
  app.add_option("--seed", seed, "seed for --init random")->capture_default_str();
  app.add_option("--max-moves", max_moves, "accepted move budget (ICM: sweeps)")->capture_default_str();
  app.add_option("--epsilon", epsilon, "minimum decrease to accept a move")->capture_default_str();
  app.add_option("--kernel", kernel, "tiered DP kernel: fast|naive")->capture_default_str();
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--verify-bound", spec.verify_bound, "enumerate optima and check the 2-kappa bound");
  app.add_flag("--oracle", spec.oracle, "enumerate the global optimum (small models only)");
  app.add_flag("--no-timing", no_timing, "write 0 for all timings (byte-reproducible outputs)");
  app.add_option("--write-model", write_model, "also save the built model as a binary container");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);
    spec.family = parse_family(family);
    spec.solver = parse_solver(solver);
    spec.left = left;
    spec.right = right;
    spec.fg_unary = fg;
    spec.bg_unary = bg;
    for (const auto& p : inputs) spec.inputs.emplace_back(p);
    for (const auto& p : masks) spec.masks.emplace_back(p);
    spec.out_dir = out_dir;
    spec.timing = !no_timing;
    if (!write_model.empty()) spec.write_model = write_model;
    spec.config.seed = seed;
    spec.config.max_moves = max_moves;
    spec.config.epsilon = epsilon;
    if (kernel == "fast") {
      spec.config.kernel = DpKernel::Fast;
    } else if (kernel == "naive") {
      spec.config.kernel = DpKernel::Naive;
    } else {
      throw ModelError("unknown kernel '" + kernel + "'");
    }

    const RunRecord record = run_benchmark(spec);
    std::cout << "final_energy=" << record.trace.final_energy << " moves=" << record.trace.accepted_moves()
              << " converged=" << (record.trace.converged ? "true" : "false") << '\n';
    if (record.bound) {
      std::cout << "bound_holds=" << (record.bound->bound_holds ? "true" : "false") << '\n';
    }
    return record.trace.converged ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "tmrf: " << e.what() << '\n';
    return 1;
  }
}
