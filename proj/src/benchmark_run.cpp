#include "tiered/benchmark_run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "tiered/model_io.hpp"
#include "tiered/problems.hpp"

namespace tiered {

namespace {

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::filesystem::path single_input(const ProblemSpec& spec, const char* family) {
  if (spec.inputs.size() != 1) throw ModelError(std::string(family) + " needs exactly one --input");
  return spec.inputs.front();
}

PairwisePotential stereo_pairwise(const ProblemSpec& spec) {
  if (spec.pairwise == "potts") return PairwisePotential::potts(spec.potts_v);
  if (spec.pairwise == "linear") return PairwisePotential::linear(spec.weight);
  if (spec.pairwise == "quadratic") return PairwisePotential::quadratic(spec.weight);
  if (spec.pairwise == "truncated-linear") return PairwisePotential::truncated_linear(spec.weight, spec.truncation);
  if (spec.pairwise == "truncated-quadratic") {
    return PairwisePotential::truncated_quadratic(spec.weight, spec.truncation);
  }
  throw ModelError("unknown pairwise family '" + spec.pairwise + "'");
}

}  // namespace

ProblemFamily parse_family(const std::string& name) {
  if (name == "stereo") return ProblemFamily::Stereo;
  if (name == "denoise") return ProblemFamily::Denoise;
  if (name == "segment") return ProblemFamily::Segment;
  if (name == "stitch") return ProblemFamily::Stitch;
  if (name == "raw") return ProblemFamily::Raw;
  if (name == "worst-case") return ProblemFamily::WorstCase;
  throw ModelError("unknown family '" + name + "'");
}

SolverKind parse_solver(const std::string& name) {
  if (name == "tmove1") return SolverKind::TMove1;
  if (name == "tmove2") return SolverKind::TMove2;
  if (name == "icm") return SolverKind::Icm;
  throw ModelError("unknown solver '" + name + "'");
}

const char* to_string(ProblemFamily family) {
  switch (family) {
    case ProblemFamily::Stereo: return "stereo";
    case ProblemFamily::Denoise: return "denoise";
    case ProblemFamily::Segment: return "segment";
    case ProblemFamily::Stitch: return "stitch";
    case ProblemFamily::Raw: return "raw";
    case ProblemFamily::WorstCase: return "worst-case";
  }
  return "unknown";
}

const char* to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::TMove1: return "tmove1";
    case SolverKind::TMove2: return "tmove2";
    case SolverKind::Icm: return "icm";
  }
  return "unknown";
}

EnergyModel build_problem(const ProblemSpec& spec) {
  switch (spec.family) {
    case ProblemFamily::Stereo:
      return build_stereo(read_image(spec.left), read_image(spec.right), spec.labels, stereo_pairwise(spec),
                          spec.data_truncation);
    case ProblemFamily::Denoise:
      return build_denoise(read_image(single_input(spec, "denoise")), spec.lambda, spec.labels);
    case ProblemFamily::Segment:
      if (spec.fg_unary.empty() || spec.bg_unary.empty()) throw ModelError("segment needs --fg and --bg");
      return build_segment(read_image(single_input(spec, "segment")), read_cost_map(spec.fg_unary),
                           read_cost_map(spec.bg_unary), spec.potts_v, spec.beta);
    case ProblemFamily::Stitch: {
      std::vector<GrayImage> images;
      std::vector<GrayImage> masks;
      for (const auto& p : spec.inputs) images.push_back(read_image(p));
      for (const auto& p : spec.masks) masks.push_back(read_image(p));
      return build_stitch(images, masks);
    }
    case ProblemFamily::Raw: return load_model(single_input(spec, "raw"));
    case ProblemFamily::WorstCase: return worst_case_instance(spec.q);
  }
  throw ModelError("unknown family");
}

SolverConfig resolve_config(const ProblemSpec& spec) {
  SolverConfig c = spec.config;
  if (spec.init == "argmin") {
    c.init = InitKind::UnaryArgmin;
  } else if (spec.init == "random") {
    c.init = InitKind::Random;
  } else if (spec.init.rfind("uniform:", 0) == 0) {
    c.init = InitKind::Uniform;
    try {
      c.uniform_label = std::stoi(spec.init.substr(8));
    } catch (const std::exception&) {
      throw ModelError("bad init '" + spec.init + "'");
    }
  } else {
    throw ModelError("unknown init '" + spec.init + "' (argmin, random, uniform:<label>)");
  }
  c.schedule = spec.solver == SolverKind::TMove2 ? Schedule::AlternateVH : Schedule::VerticalOnly;
  return c;
}

SolveTrace solve(const EnergyModel& model, SolverKind solver, const SolverConfig& config) {
  return solver == SolverKind::Icm ? run_icm(model, config) : run(model, config);
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace, SolverKind solver, bool timing) {
  out << "move,direction,energy,ms\n";
  out << "0,init," << number(trace.initial_energy) << ",0\n";
  for (const MoveRecord& m : trace.moves) {
    if (!m.accepted) continue;
    out << m.index << ',' << (solver == SolverKind::Icm ? "icm" : to_string(m.direction)) << ','
        << number(m.energy_after) << ',' << (timing ? number(m.ms) : "0") << '\n';
  }
}

void write_record(std::ostream& out, const RunRecord& record, const EnergyModel& model, bool timing) {
  const SolveTrace& t = record.trace;
  out << "problem=" << record.problem_id << '\n'
      << "solver=" << record.solver_id << '\n'
      << "rows=" << model.dims().rows << '\n'
      << "cols=" << model.dims().cols << '\n'
      << "labels=" << model.num_labels() << '\n'
      << "pairwise=" << to_string(model.pairwise().family()) << '\n'
      << "initial_energy=" << number(t.initial_energy) << '\n'
      << "final_energy=" << number(t.final_energy) << '\n'
      << "attempted_moves=" << t.moves.size() << '\n'
      << "accepted_moves=" << t.accepted_moves() << '\n'
      << "converged=" << (t.converged ? "true" : "false") << '\n'
      << "wall_ms=" << (timing ? number(record.wall_ms) : "0") << '\n'
      << "trace=";
  out << number(t.initial_energy);
  for (const MoveRecord& m : t.moves)
    if (m.accepted) out << ';' << number(m.energy_after);
  out << '\n';
  if (record.oracle_energy) out << "oracle.optimum_energy=" << number(*record.oracle_energy) << '\n';
  if (record.oracle_error) out << "oracle.error=" << *record.oracle_error << '\n';
  if (record.bound) {
    std::string kv = record.bound->to_key_value();
    std::size_t start = 0;
    while (start < kv.size()) {
      const std::size_t end = kv.find('\n', start);
      out << "bound." << kv.substr(start, end - start) << '\n';
      start = end + 1;
    }
  }
  if (record.bound_error) out << "bound.error=" << *record.bound_error << '\n';
}

GrayImage label_image(const Labeling& f, int num_labels) {
  GrayImage img;
  img.rows = f.dims.rows;
  img.cols = f.dims.cols;
  img.pixels.resize(f.labels.size());
  for (std::size_t p = 0; p < f.labels.size(); ++p) {
    img.pixels[p] = num_labels <= 1 ? 0
                                    : static_cast<std::uint8_t>(std::lround(f.labels[p] * 255.0 / (num_labels - 1)));
  }
  return img;
}

RunRecord run_benchmark(const ProblemSpec& spec) {
  const EnergyModel model = build_problem(spec);
  if (spec.write_model) save_model(*spec.write_model, model);

  RunRecord record;
  record.problem_id = to_string(spec.family);
  if (!spec.inputs.empty()) record.problem_id += ":" + spec.inputs.front().stem().string();
  else if (!spec.left.empty()) record.problem_id += ":" + spec.left.stem().string();
  record.solver_id = to_string(spec.solver);

  const SolverConfig config = resolve_config(spec);
  const auto start = std::chrono::steady_clock::now();
  record.trace = solve(model, spec.solver, config);
  record.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (spec.oracle) {
    try {
      record.oracle_energy = brute_optimum(model).energy;
    } catch (const ModelError& e) {
      record.oracle_error = e.what();
    }
  }
  if (spec.verify_bound) {
    try {
      record.bound = check_bound(model, record.trace.labeling);
    } catch (const ModelError& e) {
      record.bound_error = e.what();
    }
  }

  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    write_pgm(spec.out_dir / "labels.pgm", label_image(record.trace.labeling, model.num_labels()));
    {
      std::ofstream csv(spec.out_dir / "trace.csv");
      if (!csv) throw IoError((spec.out_dir / "trace.csv").string() + ": cannot open for writing");
      write_trace_csv(csv, record.trace, spec.solver, spec.timing);
    }
    std::ofstream kv(spec.out_dir / "record.txt");
    if (!kv) throw IoError((spec.out_dir / "record.txt").string() + ": cannot open for writing");
    write_record(kv, record, model, spec.timing);
  }
  return record;
}

}  // namespace tiered
