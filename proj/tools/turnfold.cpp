#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "turnfold/turnfold.hpp"

using namespace turnfold;
using io::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + file + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& file) { return io::parse_json(slurp(file)); }

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json log_json(const TrajectoryLog& log) {
  json pos = json::array();
  for (auto p : log.final_positions) pos.push_back({p.x, p.y});
  return {{"seed", log.seed},
          {"outcome", to_string(log.outcome)},
          {"total_time", log.total_time},
          {"steps", log.step_count},
          {"final_states", log.final_states},
          {"final_positions", pos}};
}

json stats_json(const TrialStats& s) {
  return {{"trials", s.trials},
          {"mean_time", s.mean_time},
          {"std_time", s.std_time},
          {"standard_error", s.standard_error()},
          {"blocked_fraction", s.blocked_fraction},
          {"mean_steps", s.mean_steps}};
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size() || v < 2) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad size '" + item + "' (sizes are integers >= 2)");
    }
  }
  if (out.empty()) throw UsageError("no sizes given");
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"turnfold: simulate, check and compile Turning Machines"};
  app.require_subcommand(1);

  int verdict_exit = 0;
  std::function<void()> action;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Sample trajectories of a machine");
  std::string sim_file, sim_jsonl;
  std::uint64_t sim_seed = 0;
  std::size_t sim_trials = 1;
  sim->add_option("machine", sim_file, "Machine JSON file")->required();
  sim->add_option("--seed", sim_seed, "Master seed");
  sim->add_option("--trials", sim_trials, "Number of trajectories")->check(CLI::PositiveNumber);
  sim->add_option("--jsonl", sim_jsonl, "Write the events of a single trajectory as JSONL");
  sim->callback([&] {
    action = [&] {
      const auto tm = io::machine_from_json(read_json(sim_file));
      if (sim_trials == 1) {
        const auto log = sample_trajectory(tm, sim_seed);
        if (!sim_jsonl.empty()) {
          std::ostringstream os;
          io::write_jsonl(os, log.events);
          emit(os.str(), sim_jsonl);
        }
        std::cout << dump(log_json(log));
      } else {
        if (!sim_jsonl.empty()) throw UsageError("--jsonl needs --trials 1");
        std::cout << dump(stats_json(trial_stats(tm, sim_trials, sim_seed)));
      }
    };
  });

  // check
  auto* chk = app.add_subcommand("check", "Decide foldability by exhaustive search");
  std::string chk_file;
  std::size_t chk_cap = kDefaultReachCap;
  chk->add_option("machine", chk_file, "Machine JSON file")->required();
  chk->add_option("--cap", chk_cap, "Maximum number of configurations to explore")->check(CLI::PositiveNumber);
  chk->callback([&] {
    action = [&] {
      const auto d = decide(io::machine_from_json(read_json(chk_file)), chk_cap);
      std::cout << dump(io::to_json(d));
      if (std::holds_alternative<Unfoldable>(d.verdict)) verdict_exit = 1;
    };
  });

  // shape gen
  auto* shp = app.add_subcommand("shape", "Shape utilities");
  shp->require_subcommand(1);
  auto* gen = shp->add_subcommand("gen", "Generate a shape");
  std::string gen_kind, gen_out;
  std::size_t gen_param = 0;
  gen->add_option("kind", gen_kind, "square, cross or spiral")
      ->required()
      ->check(CLI::IsMember({"square", "cross", "spiral"}));
  gen->add_option("param", gen_param, "Side, arm length or number of turns")->required();
  gen->add_option("-o,--output", gen_out, "Output file");
  gen->callback([&] {
    action = [&] {
      const Shape s = gen_kind == "square" ? square(gen_param) : gen_kind == "cross" ? cross(gen_param) : spiral(gen_param);
      emit(io::to_json(s).dump() + "\n", gen_out);
    };
  });

  // compile
  auto* cmp = app.add_subcommand("compile", "Compile a target into initial states");
  cmp->require_subcommand(1);
  std::string cmp_out, cmp_path_out;
  auto finish = [&](const StateProgram& sp, const Path& target) {
    const auto report = validate_states(sp, target);
    if (!cmp_path_out.empty()) emit(io::to_json(target).dump() + "\n", cmp_path_out);
    emit(io::to_json(sp).dump() + "\n", cmp_out);
    if (!report.passed()) std::cerr << "warning: validation failed: " << io::to_json(report).dump() << "\n";
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cmp_out, "Program output file");
    sub->add_option("--path-out", cmp_path_out, "Write the target path");
  };

  auto* cz = cmp->add_subcommand("zigzag", "Zig-zag path to states");
  std::string cz_file;
  cz->add_option("path", cz_file, "Path JSON file, or a y-monotone shape file")->required();
  add_common(cz);
  cz->callback([&] {
    action = [&] {
      const auto j = read_json(cz_file);
      const Path p = j.value("ordered", false) ? io::path_from_json(j) : monotone_traversal(io::shape_from_json(j));
      const Path target = p.translated(-p.front());
      finish(zigzag_states(target), target);
    };
  });

  auto* cs = cmp->add_subcommand("spiral", "Spiral turning numbers");
  std::size_t cs_k = 1;
  int cs_t0 = 0;
  std::string cs_dir = "in-to-out", cs_layout = "published";
  cs->add_option("--k", cs_k, "Number of turns")->required()->check(CLI::PositiveNumber);
  cs->add_option("--t0", cs_t0, "First turning number");
  cs->add_option("--dir", cs_dir, "in-to-out or out-to-in")->check(CLI::IsMember({"in-to-out", "out-to-in"}));
  cs->add_option("--layout", cs_layout, "published or geometric")->check(CLI::IsMember({"published", "geometric"}));
  add_common(cs);
  cs->callback([&] {
    action = [&] {
      const auto dir = cs_dir == "in-to-out" ? SpiralDirection::InToOut : SpiralDirection::OutToIn;
      const auto sp = spiral_states(cs_k, cs_t0, dir,
                                    cs_layout == "published" ? SpiralLayout::Published : SpiralLayout::Geometric);
      const Path p = spiral_traversal(cs_k, dir);
      finish(sp, p.translated(-p.front()));
    };
  });

  auto* cc = cmp->add_subcommand("scaled", "Exact factor-2 construction");
  std::string cc_file, cc_reading = "corrected";
  cc->add_option("shape", cc_file, "Shape JSON file")->required();
  cc->add_option("--reading", cc_reading, "corrected or verbatim")->check(CLI::IsMember({"corrected", "verbatim"}));
  add_common(cc);
  cc->callback([&] {
    action = [&] {
      const auto plan = fold_plan(io::shape_from_json(read_json(cc_file)), true,
                                  cc_reading == "corrected" ? SignReading::Corrected : SignReading::Verbatim);
      finish(plan.program, plan.target);
    };
  });

  auto* cp = cmp->add_subcommand("path", "Turning numbers along any simple path");
  std::string cp_file, cp_terminal = "zero";
  int cp_anchor = 0;
  cp->add_option("path", cp_file, "Path JSON file")->required();
  cp->add_option("--anchor", cp_anchor, "Turning number of the first segment");
  cp->add_option("--terminal", cp_terminal, "zero or repeat")->check(CLI::IsMember({"zero", "repeat"}));
  add_common(cp);
  cp->callback([&] {
    action = [&] {
      const Path p = io::path_from_json(read_json(cp_file));
      const Path target = p.translated(-p.front());
      finish(states_from_path(target, cp_anchor, cp_terminal == "zero" ? Terminal::Zero : Terminal::RepeatLast), target);
    };
  });

  // fold
  auto* fld = app.add_subcommand("fold", "Compile a shape, decide and sample the machine, report the error");
  std::string fld_file;
  bool fld_scale2 = false;
  std::size_t fld_trials = 100, fld_cap = 1'000'000;
  std::uint64_t fld_seed = 0;
  fld->add_option("shape", fld_file, "Shape JSON file")->required();
  fld->add_flag("--scale2", fld_scale2, "Fold the shape scaled by 2 through a yw-separator");
  fld->add_option("--trials", fld_trials, "Sampled trajectories")->check(CLI::PositiveNumber);
  fld->add_option("--seed", fld_seed, "Master seed");
  fld->add_option("--cap", fld_cap, "Exhaustive search cap")->check(CLI::PositiveNumber);
  fld->callback([&] {
    action = [&] {
      const Shape shape = io::shape_from_json(read_json(fld_file));
      const auto plan = fold_plan(shape, fld_scale2);
      const auto tm = plan.program.machine();
      const auto d = decide(tm, fld_cap);
      std::size_t finals = 0, max_error = 0;
      for (std::size_t t = 0; t < fld_trials; ++t) {
        const auto log = sample_trajectory(tm, trial_seed(fld_seed, t), SampleOptions{false});
        if (log.outcome == Outcome::Final) ++finals;
        max_error = std::max(max_error, folding_error(plan.shape, log.final_positions));
      }
      json j{{"monomers", tm.size()},
             {"program", io::to_json(plan.program)},
             {"validation", io::to_json(validate_states(plan.program, plan.target))},
             {"verdict", verdict_name(d.verdict)},
             {"reachable_count", d.report.reachable_count},
             {"trials", fld_trials},
             {"final", finals},
             {"error", max_error},
             {"target_error", folding_error(plan.shape, plan.target.points())},
             {"perimeter_length", perimeter_length(plan.shape)}};
      std::cout << dump(j);
    };
  });

  // timing
  auto* tim = app.add_subcommand("timing", "Completion times of L^s_n over a range of sizes, as CSV");
  int tim_s = 1;
  std::string tim_sizes = "16,64,256";
  std::size_t tim_trials = 1000;
  std::uint64_t tim_seed = 0;
  tim->add_option("--s", tim_s, "Initial state of the line machine")->check(CLI::Range(1, 5));
  tim->add_option("--sizes", tim_sizes, "Comma-separated ascending sizes");
  tim->add_option("--trials", tim_trials, "Trials per size")->check(CLI::PositiveNumber);
  tim->add_option("--seed", tim_seed, "Master seed");
  tim->callback([&] {
    action = [&] {
      const auto sizes = parse_sizes(tim_sizes);
      if (!std::is_sorted(sizes.begin(), sizes.end())) throw UsageError("sizes must be ascending");
      io::write_csv(std::cout, scaling_experiment(tim_s, sizes, tim_trials, tim_seed));
    };
  });

  // render
  auto* ren = app.add_subcommand("render", "Draw a configuration or a trajectory as SVG");
  std::string ren_file, ren_out, ren_machine, ren_moves;
  RenderSpec spec;
  bool no_states = false, no_highlight = false;
  ren->add_option("input", ren_file, "Machine JSON or trajectory JSONL")->required();
  ren->add_option("-o,--output", ren_out, "SVG output file")->required();
  ren->add_option("--machine", ren_machine, "Machine file for a trajectory input");
  ren->add_option("--moves", ren_moves, "Comma-separated moves applied before drawing a machine");
  ren->add_option("--scale", spec.scale, "Pixels per grid unit")->check(CLI::PositiveNumber);
  ren->add_option("--stride", spec.frame_stride, "Draw every k-th trajectory frame")->check(CLI::PositiveNumber);
  ren->add_flag("--no-states", no_states, "Hide state labels");
  ren->add_flag("--no-highlight", no_highlight, "Do not mark blocked bonds");
  ren->callback([&] {
    action = [&] {
      spec.show_states = !no_states;
      spec.highlight_blocked = !no_highlight;
      if (ends_with(ren_file, ".jsonl")) {
        if (ren_machine.empty()) throw UsageError("rendering a trajectory needs --machine");
        const auto tm = io::machine_from_json(read_json(ren_machine));
        std::ifstream in(ren_file);
        if (!in) throw UsageError("cannot open '" + ren_file + "'");
        const auto events = io::read_jsonl(in);
        emit(render_trajectory_svg(tm, events, spec), ren_out);
        return;
      }
      const auto tm = io::machine_from_json(read_json(ren_file));
      std::vector<std::size_t> moves;
      if (!ren_moves.empty()) {
        std::stringstream ss(ren_moves);
        std::string item;
        while (std::getline(ss, item, ',')) {
          try {
            moves.push_back(static_cast<std::size_t>(std::stoull(item)));
          } catch (const std::exception&) {
            throw UsageError("bad move '" + item + "'");
          }
        }
      }
      emit(render_svg(replay(tm, moves), spec), ren_out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (action) action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return verdict_exit;
}
