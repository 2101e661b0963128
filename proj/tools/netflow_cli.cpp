// netflow: rank alternatives, simulate preference transitions, identify
// weights, or serve the decision API. Links only the C interface.
//
// Exit codes: 0 success, 1 environment / I-O, 2 validation.

#include <csignal>
#include <cstdio>
#include <ctime>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "netflow/netflow.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEnvironment = 1;
constexpr int kExitValidation = 2;

struct Failure {
  int exit_code;
  std::string message;
};

template <class T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};

using CriteriaPtr = std::unique_ptr<nf_criteria, HandleDeleter<nf_criteria, nf_criteria_free>>;
using ModelPtr = std::unique_ptr<nf_model, HandleDeleter<nf_model, nf_model_free>>;
using RankingPtr = std::unique_ptr<nf_ranking, HandleDeleter<nf_ranking, nf_ranking_free>>;
using ScenarioPtr = std::unique_ptr<nf_scenario, HandleDeleter<nf_scenario, nf_scenario_free>>;
using TrajectoryPtr = std::unique_ptr<nf_trajectory, HandleDeleter<nf_trajectory, nf_trajectory_free>>;
using IdentifiedPtr = std::unique_ptr<nf_identified, HandleDeleter<nf_identified, nf_identified_free>>;
using ServerPtr = std::unique_ptr<nf_server, HandleDeleter<nf_server, nf_server_free>>;

void check(nf_status status, const std::string& context = {}) {
  if (status == NF_OK) return;
  std::string message = nf_last_error();
  if (!context.empty()) message = context + ": " + message;
  throw Failure{nf_status_is_environmental(status) ? kExitEnvironment : kExitValidation, message};
}

[[noreturn]] void invalid(const std::string& message) { throw Failure{kExitValidation, message}; }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    invalid("invalid " + flag + ": '" + text + "' is not a number");
  }
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, "--weights"));
  if (out.empty()) invalid("invalid --weights: no values given");
  return out;
}

// q:p:v[,q:p:v...]
std::vector<nf_thresholds> parse_thresholds(const std::string& text) {
  std::vector<nf_thresholds> out;
  for (const auto& triple : split(text, ',')) {
    const auto parts = split(triple, ':');
    if (parts.size() != 3) invalid("invalid --thresholds: '" + triple + "' is not q:p:v");
    out.push_back({parse_double(parts[0], "--thresholds"), parse_double(parts[1], "--thresholds"),
                   parse_double(parts[2], "--thresholds")});
  }
  if (out.empty()) invalid("invalid --thresholds: no triples given");
  return out;
}

CriteriaPtr load_criteria(const std::string& path) {
  nf_criteria* raw = nullptr;
  check(nf_criteria_load_csv(path.c_str(), &raw), path);
  return CriteriaPtr(raw);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

struct RankOptions {
  std::string data;
  std::string weights;
  std::string thresholds;
  int exponent = 3;
  std::string out;
};

int run_rank(const RankOptions& opt) {
  auto criteria = load_criteria(opt.data);
  const auto weights = parse_weights(opt.weights);
  const auto thresholds = parse_thresholds(opt.thresholds);
  // The model is checked on its own first so a bad weight vector is reported
  // as such even when its length is also wrong.
  nf_model* raw_model = nullptr;
  check(nf_model_create(weights.size(), weights.data(), thresholds.data(), thresholds.size(), opt.exponent,
                        &raw_model),
        "invalid model");
  ModelPtr model(raw_model);
  const std::size_t n = nf_criteria_criteria(criteria.get());
  if (weights.size() != n) {
    invalid("invalid --weights: got " + std::to_string(weights.size()) + " values for " + std::to_string(n) +
            " criteria");
  }

  nf_ranking* raw_ranking = nullptr;
  check(nf_rank(criteria.get(), model.get(), &raw_ranking));
  RankingPtr ranking(raw_ranking);

  std::printf("%-12s %14s %6s\n", "id", "score", "rank");
  for (std::size_t pos = 0; pos < nf_ranking_size(ranking.get()); ++pos) {
    const char* id = nullptr;
    double score = 0.0;
    std::size_t rank = 0;
    check(nf_ranking_entry(ranking.get(), pos, &id, &score, &rank));
    std::printf("%-12s %14s %6zu\n", id, format_fixed(score, 8).c_str(), rank);
  }
  if (!opt.out.empty()) check(nf_ranking_write_json(ranking.get(), opt.out.c_str()));
  return kExitOk;
}

struct SimulateOptions {
  std::string scenario;
  std::string out;
  std::optional<double> alpha;
};

int run_simulate(const SimulateOptions& opt) {
  nf_scenario* raw_scenario = nullptr;
  check(nf_scenario_load(opt.scenario.c_str(), &raw_scenario), opt.scenario);
  ScenarioPtr scenario(raw_scenario);
  if (opt.alpha) check(nf_scenario_set_alpha(scenario.get(), *opt.alpha), "invalid --alpha");

  nf_trajectory* raw_trajectory = nullptr;
  check(nf_simulate(scenario.get(), &raw_trajectory));
  TrajectoryPtr trajectory(raw_trajectory);
  check(nf_trajectory_write(trajectory.get(), opt.out.c_str()));

  for (std::size_t e = 0; e < nf_trajectory_event_count(trajectory.get()); ++e) {
    nf_rank_event ev{};
    check(nf_trajectory_event(trajectory.get(), e, &ev));
    std::printf("CROSSING %s over %s at t≈%s\n", ev.upper_id, ev.lower_id,
                format_fixed(ev.crossing_time, 2).c_str());
  }
  return kExitOk;
}

struct IdentifyOptions {
  std::string data;
  std::string thresholds;
  int exponent = 3;
  std::string scores;
  std::string ranking;
};

int run_identify(const IdentifyOptions& opt) {
  if (opt.scores.empty() == opt.ranking.empty()) invalid("identify needs exactly one of --scores or --ranking");
  auto criteria = load_criteria(opt.data);
  const auto thresholds = parse_thresholds(opt.thresholds);
  const std::size_t n = nf_criteria_criteria(criteria.get());
  if (thresholds.size() != 1 && thresholds.size() != n) {
    invalid("invalid --thresholds: give one q:p:v triple or " + std::to_string(n));
  }

  nf_identified* raw_fit = nullptr;
  if (!opt.scores.empty()) {
    auto table = load_criteria(opt.scores);
    if (nf_criteria_criteria(table.get()) != 1) invalid("invalid --scores: expected a CSV with header 'id,score'");
    const std::size_t m = nf_criteria_alternatives(table.get());
    std::vector<const char*> ids(m);
    std::vector<double> values(m);
    for (std::size_t i = 0; i < m; ++i) {
      ids[i] = nf_criteria_id(table.get(), i);
      check(nf_criteria_value(table.get(), i, 0, &values[i]));
    }
    check(nf_identify_scores(criteria.get(), thresholds.data(), thresholds.size(), opt.exponent, ids.data(),
                             values.data(), m, &raw_fit),
          "identify");
  } else {
    const auto order = split(opt.ranking, '>');
    std::vector<std::string> trimmed;
    for (const auto& id : order) {
      const auto b = id.find_first_not_of(' ');
      const auto e = id.find_last_not_of(' ');
      trimmed.push_back(b == std::string::npos ? std::string() : id.substr(b, e - b + 1));
    }
    std::vector<const char*> ids;
    for (const auto& id : trimmed) ids.push_back(id.c_str());
    check(nf_identify_ranking(criteria.get(), thresholds.data(), thresholds.size(), opt.exponent, ids.data(),
                              ids.size(), &raw_fit),
          "identify");
  }
  IdentifiedPtr fit(raw_fit);

  const double* w = nf_identified_weights(fit.get());
  std::string weights;
  for (std::size_t k = 0; k < nf_identified_count(fit.get()); ++k) {
    if (k) weights += ',';
    weights += format_fixed(w[k], 4);
  }
  std::printf("weights: %s\n", weights.c_str());
  std::printf("residual: %.3e\n", nf_identified_residual(fit.get()));
  std::printf("ranking_reproduced: %s\n", nf_identified_ranking_reproduced(fit.get()) ? "yes" : "no");
  if (nf_identified_degenerate(fit.get())) std::fprintf(stderr, "warning: %s\n", nf_identified_note(fit.get()));
  return kExitOk;
}

struct ServeOptions {
  int port = 8080;
  std::string host = "0.0.0.0";
  std::string static_dir;
  double idle_expiry = 3600.0;
};

void log_line(const char* line, void*) {
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  std::fprintf(stderr, "%s %s\n", stamp, line);
  std::fflush(stderr);
}

int run_serve(const ServeOptions& opt) {
  // Signals go to a dedicated waiter thread instead of interrupting the server.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  nf_server* raw = nullptr;
  check(nf_server_create(opt.static_dir.empty() ? nullptr : opt.static_dir.c_str(), opt.idle_expiry, log_line,
                         nullptr, &raw));
  ServerPtr server(raw);
  check(nf_server_bind(server.get(), opt.host.c_str(), opt.port));
  std::fprintf(stderr, "listening on %s:%d\n", opt.host.c_str(), nf_server_port(server.get()));
  std::fflush(stderr);

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    nf_server_stop(server.get());
  });
  const nf_status status = nf_server_run(server.get());
  // Wake the waiter if the server stopped for another reason.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  check(status);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Net-flow multicriteria ranking, dynamic preference transitions and weight identification"};
  app.require_subcommand(1);

  RankOptions rank_opt;
  auto* rank_cmd = app.add_subcommand("rank", "Rank alternatives by static net-flow score");
  rank_cmd->add_option("--data", rank_opt.data, "Criteria CSV (id,<label1>,...)")->required();
  rank_cmd->add_option("--weights", rank_opt.weights, "Comma-separated weights w1,...,wn")->required();
  rank_cmd->add_option("--thresholds", rank_opt.thresholds, "q:p:v per criterion, or one triple for all")
      ->required();
  rank_cmd->add_option("--exponent", rank_opt.exponent, "Discordance exponent")->check(CLI::PositiveNumber);
  rank_cmd->add_option("--out", rank_opt.out, "Write the ranking as JSON");

  SimulateOptions sim_opt;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a dynamic preference transition");
  sim_cmd->add_option("--scenario", sim_opt.scenario, "Scenario JSON")->required();
  sim_cmd->add_option("--out", sim_opt.out, "Trajectory CSV (events go to <out>.events.json)")->required();
  sim_cmd->add_option("--alpha", sim_opt.alpha, "Override the filter smoothing factor");

  IdentifyOptions id_opt;
  auto* id_cmd = app.add_subcommand("identify", "Identify criterion weights from scores or a ranking");
  id_cmd->add_option("--data", id_opt.data, "Criteria CSV")->required();
  id_cmd->add_option("--thresholds", id_opt.thresholds, "q:p:v per criterion, or one triple for all")->required();
  id_cmd->add_option("--exponent", id_opt.exponent, "Discordance exponent")->check(CLI::PositiveNumber);
  id_cmd->add_option("--scores", id_opt.scores, "Target scores CSV (id,score)");
  id_cmd->add_option("--ranking", id_opt.ranking, "Ranking, best first: \"id>id>...\"");

  ServeOptions serve_opt;
  auto* serve_cmd = app.add_subcommand("serve", "Run the decision service");
  serve_cmd->add_option("--port", serve_opt.port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", serve_opt.host, "Bind address");
  serve_cmd->add_option("--static", serve_opt.static_dir, "Directory of UI assets served at /");
  serve_cmd->add_option("--session-expiry", serve_opt.idle_expiry, "Idle session expiry in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*rank_cmd) return run_rank(rank_opt);
    if (*sim_cmd) return run_simulate(sim_opt);
    if (*id_cmd) return run_identify(id_opt);
    if (*serve_cmd) return run_serve(serve_opt);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.exit_code;
  }
  return kExitValidation;
}
