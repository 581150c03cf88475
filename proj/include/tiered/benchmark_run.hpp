#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tiered/grid_energy.hpp"
#include "tiered/image_io.hpp"
#include "tiered/move_engine.hpp"
#include "tiered/verify.hpp"

namespace tiered {

enum class ProblemFamily { Stereo, Denoise, Segment, Stitch, Raw, WorstCase };
enum class SolverKind { TMove1, TMove2, Icm };

ProblemFamily parse_family(const std::string& name);
SolverKind parse_solver(const std::string& name);
const char* to_string(ProblemFamily family);
const char* to_string(SolverKind solver);

struct ProblemSpec {
  ProblemFamily family = ProblemFamily::Raw;

  std::filesystem::path left;
  std::filesystem::path right;
  std::vector<std::filesystem::path> inputs;  // one image (or model) / several for stitch
  std::vector<std::filesystem::path> masks;   // stitch
  std::filesystem::path fg_unary;             // segment
  std::filesystem::path bg_unary;             // segment

  int labels = 16;               // disparities / grey levels
  double lambda = 5.0;           // denoise smoothness weight
  double potts_v = 1.0;
  double beta = 0.0;             // segment contrast
  std::string pairwise = "potts";  // stereo: potts|linear|quadratic|truncated-linear|truncated-quadratic
  double weight = 1.0;           // stereo linear/quadratic weight
  double truncation = 2.0;       // stereo truncated families
  double data_truncation = 20.0; // stereo unary
  double q = 10.0;               // worst-case

  SolverKind solver = SolverKind::TMove1;
  std::string init = "argmin";   // argmin | uniform:<l> | random
  SolverConfig config;

  std::filesystem::path out_dir;
  bool verify_bound = false;
  bool oracle = false;
  bool timing = true;            // false writes 0 in every ms field
  std::optional<std::filesystem::path> write_model;
};

struct RunRecord {
  std::string problem_id;
  std::string solver_id;
  SolveTrace trace;
  double wall_ms = 0.0;
  std::optional<BoundReport> bound;
  std::optional<std::string> bound_error;
  std::optional<double> oracle_energy;
  std::optional<std::string> oracle_error;
};

EnergyModel build_problem(const ProblemSpec& spec);

// Applies spec.init / spec.seed to spec.config.
SolverConfig resolve_config(const ProblemSpec& spec);

SolveTrace solve(const EnergyModel& model, SolverKind solver, const SolverConfig& config);

// CSV with header move,direction,energy,ms: row 0 is the initial labeling,
// then one row per accepted move.
void write_trace_csv(std::ostream& out, const SolveTrace& trace, SolverKind solver, bool timing);

// Flat key=value record.
void write_record(std::ostream& out, const RunRecord& record, const EnergyModel& model, bool timing);

// Labels mapped linearly onto 0..255.
GrayImage label_image(const Labeling& f, int num_labels);

// Builds the model, solves, runs the requested checks and writes
// labels.pgm, trace.csv and record.txt into spec.out_dir.
RunRecord run_benchmark(const ProblemSpec& spec);

}  // namespace tiered
