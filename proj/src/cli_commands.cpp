#include "banditlab/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "banditlab/agents/linfullpost.hpp"
#include "banditlab/agents/lu_gauss.hpp"
#include "banditlab/agents/lu_sivi.hpp"
#include "banditlab/agents/neural_linear.hpp"
#include "banditlab/agents/uniform_agent.hpp"
#include "banditlab/envs/synthetic.hpp"
#include "banditlab/errors.hpp"
#include "banditlab/harness/histogram.hpp"
#include "banditlab/harness/metrics.hpp"
#include "banditlab/rng.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace banditlab::cli {

namespace {

constexpr char kVersion[] = "0.1.0";

// Built-in synthetic tables are generated with a fixed seed so the dataset
// itself is identical across runs; only the row order seen by a trial varies
// (through the environment stream).
constexpr std::uint64_t kSynthTableSeed = 0x5EED;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw DataError("cannot rename '" + tmp.string() + "' to '" + path.string() +
                        "': " + ec.message());
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory '" + dir + "': " + ec.message());
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(std::span<const double> xs) {
    MeanSe out;
    if (xs.empty()) return out;
    for (const double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (const double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(xs.size()));
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_csv_double(const std::string& file, std::size_t lineno, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(file + " line " + std::to_string(lineno) + ": bad number '" + s + "'");
    }
}

std::uint64_t parse_csv_u64(const std::string& file, std::size_t lineno, const std::string& s) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(file + " line " + std::to_string(lineno) + ": bad integer '" + s + "'");
    }
}

constexpr char kTrialsHeader[] =
    "trial,dataset,agent,master_seed,horizon,cumulative_regret,simple_regret";

std::string render_trials_csv(const ExperimentConfig& cfg,
                              std::span<const harness::TrialResult> results) {
    std::string out = kTrialsHeader;
    out += '\n';
    const std::size_t window = std::min(harness::kSimpleRegretWindow, cfg.horizon);
    for (const harness::TrialResult& r : results) {
        out += std::to_string(r.trial_index);
        out += ',';
        out += r.dataset_id;
        out += ',';
        out += r.agent_id;
        out += ',';
        out += std::to_string(r.master_seed);
        out += ',';
        out += std::to_string(cfg.horizon);
        out += ',';
        out += fmt(r.cumulative_regret);
        out += ',';
        out += fmt(harness::simple_regret(r, window));
        out += '\n';
    }
    return out;
}

std::string render_regret_curve_csv(std::span<const harness::TrialResult> results,
                                    std::size_t horizon) {
    std::string out = "step,mean,se\n";
    std::vector<double> cum(results.size(), 0.0);
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < results.size(); ++i) cum[i] += results[i].step_regret[t];
        const MeanSe ms = mean_se(cum);
        out += std::to_string(t + 1);
        out += ',';
        out += fmt(ms.mean);
        out += ',';
        out += fmt(ms.se);
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["dataset"] = cfg.dataset;
    j["data_path"] = cfg.data_path;
    j["schema_path"] = cfg.schema_path;
    j["agent"] = cfg.agent;
    j["out_dir"] = cfg.out_dir;
    j["horizon"] = cfg.horizon;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["jobs"] = cfg.jobs;
    j["latent_dim"] = cfg.latent_dim;
    j["mixture_size"] = cfg.mixture_size;
    j["train_every"] = cfg.train_every;
    j["train_steps"] = cfg.train_steps;
    j["batch_size"] = cfg.batch_size;
    j["learning_rate"] = cfg.learning_rate;
    j["nig_a0"] = cfg.nig_a0;
    j["nig_b0"] = cfg.nig_b0;
    j["nig_lambda"] = cfg.nig_lambda;
    j["wheel_delta"] = cfg.wheel_delta;
    return j;
}

std::vector<harness::TrialResult> run_trials_impl(const ExperimentConfig& cfg,
                                                  const ResolvedDataset& ds) {
    std::size_t context_dim = 0;
    std::size_t num_actions = 0;
    {
        const auto probe = make_environment(ds, cfg, 0);
        context_dim = probe->context_dim();
        num_actions = probe->num_actions();
    }

    std::vector<harness::TrialResult> results(cfg.trials);
    std::vector<std::exception_ptr> errors(cfg.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            try {
                auto env = make_environment(ds, cfg, t);
                auto agent = make_agent(cfg, context_dim, num_actions, t);
                results[t] = harness::run_trial(*env, *agent, cfg.horizon, cfg.seed, t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };

    const std::size_t nthreads = std::min(cfg.jobs, cfg.trials);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        if (errors[t]) std::rethrow_exception(errors[t]);
    }
    return results;
}

void require_run_fields(const ExperimentConfig& cfg, bool need_out_dir) {
    if (cfg.dataset.empty()) throw ConfigError("missing required field: dataset");
    if (cfg.agent.empty()) throw ConfigError("missing required field: agent");
    if (need_out_dir && cfg.out_dir.empty()) {
        throw ConfigError("missing required field: out_dir");
    }
}

}  // namespace

ResolvedDataset resolve_dataset(const ExperimentConfig& cfg) {
    ResolvedDataset ds;
    ds.id = cfg.dataset;
    if (cfg.dataset == "wheel") {
        ds.kind = ResolvedDataset::Kind::kWheel;
        ds.wheel_delta = cfg.wheel_delta;
        return ds;
    }
    if (cfg.dataset == "synth-mushroom") {
        auto table = std::make_shared<envs::DatasetTable>(
            envs::synth_mushroom_table(2000, 20, kSynthTableSeed));
        ds.kind = ResolvedDataset::Kind::kMushroom;
        ds.harmful_class = envs::find_harmful_class(*table);
        ds.table = std::move(table);
        return ds;
    }
    if (cfg.dataset == "synth-statlog") {
        auto table = std::make_shared<envs::DatasetTable>(envs::synth_blobs_table(
            2000, 9, {0.45, 0.25, 0.12, 0.08, 0.05, 0.03, 0.02}, 2.0, kSynthTableSeed));
        ds.kind = ResolvedDataset::Kind::kClassification;
        ds.table = std::move(table);
        return ds;
    }
    if (cfg.dataset.empty()) throw ConfigError("missing required field: dataset");

    std::string data = cfg.data_path;
    std::string schema = cfg.schema_path;
    if (data.empty() || schema.empty()) {
        const char* root_env = std::getenv("BANDIT_LAB_DATA");
        const std::string root = root_env != nullptr ? root_env : ".";
        if (data.empty()) data = root + "/" + cfg.dataset + ".data";
        if (schema.empty()) schema = root + "/" + cfg.dataset + ".schema";
    }
    auto table = std::make_shared<envs::DatasetTable>(envs::load_table(data, schema));
    if (table->num_reward_cols > 0) {
        ds.kind = ResolvedDataset::Kind::kTableReward;
    } else if (cfg.dataset.rfind("mushroom", 0) == 0) {
        ds.kind = ResolvedDataset::Kind::kMushroom;
        ds.harmful_class = envs::find_harmful_class(*table);
    } else if (!table->labels.empty()) {
        ds.kind = ResolvedDataset::Kind::kClassification;
    } else {
        throw DataError("dataset '" + cfg.dataset +
                        "' has neither reward columns nor a label column");
    }
    ds.table = std::move(table);
    return ds;
}

std::unique_ptr<envs::BanditEnvironment> make_environment(const ResolvedDataset& ds,
                                                          const ExperimentConfig& cfg,
                                                          std::uint64_t trial_index) {
    const std::uint64_t env_seed = mix_seed({cfg.seed, kStreamEnv, trial_index});
    switch (ds.kind) {
        case ResolvedDataset::Kind::kWheel:
            return envs::make_wheel_env(ds.wheel_delta, env_seed, ds.id);
        case ResolvedDataset::Kind::kMushroom:
            return envs::make_mushroom_env(ds.table, ds.harmful_class, env_seed, ds.id);
        case ResolvedDataset::Kind::kClassification:
            return envs::make_classification_env(ds.table, env_seed, ds.id);
        case ResolvedDataset::Kind::kTableReward:
            return envs::make_table_reward_env(ds.table, env_seed, ds.id);
    }
    throw ConfigError("unreachable dataset kind");
}

std::unique_ptr<agents::Agent> make_agent(const ExperimentConfig& cfg,
                                          std::size_t context_dim,
                                          std::size_t num_actions,
                                          std::uint64_t trial_index) {
    const std::uint64_t tag = fnv1a(cfg.agent);
    const std::uint64_t init_seed =
        mix_seed({cfg.seed, kStreamAgentInit, trial_index, tag});
    const std::uint64_t act_seed = mix_seed({cfg.seed, kStreamAgentAct, trial_index, tag});
    const std::uint64_t train_seed =
        mix_seed({cfg.seed, kStreamTrainBatch, trial_index, tag});
    const agents::NigPrior prior{cfg.nig_a0, cfg.nig_b0, cfg.nig_lambda};

    if (cfg.agent == "uniform") {
        return std::make_unique<agents::UniformAgent>(context_dim, num_actions, act_seed);
    }
    if (cfg.agent == "linfullpost") {
        return std::make_unique<agents::LinFullPostAgent>(context_dim, num_actions, prior,
                                                          act_seed);
    }
    if (cfg.agent == "neural-linear") {
        agents::NeuralLinearConfig nc;
        nc.context_dim = context_dim;
        nc.num_actions = num_actions;
        nc.train_every = cfg.train_every;
        nc.minibatches_per_period = cfg.train_steps;
        nc.batch_size = cfg.batch_size;
        nc.lr = cfg.learning_rate;
        nc.prior = prior;
        return std::make_unique<agents::NeuralLinearAgent>(nc, init_seed, act_seed,
                                                           train_seed);
    }
    if (cfg.agent == "lu-gauss" || cfg.agent == "lu-gauss-global") {
        agents::LuGaussConfig gc;
        gc.context_dim = context_dim;
        gc.num_actions = num_actions;
        gc.latent_dim = cfg.latent_dim;
        gc.batch_size = cfg.batch_size;
        gc.train_every = cfg.train_every;
        gc.train_steps = cfg.train_steps;
        gc.learning_rate = cfg.learning_rate;
        gc.global_latent = cfg.agent == "lu-gauss-global";
        return std::make_unique<agents::LuGaussAgent>(gc, init_seed, act_seed, train_seed);
    }
    if (cfg.agent == "lu-sivi" || cfg.agent == "lu-sivi-global") {
        agents::LuSiviConfig sc;
        sc.context_dim = context_dim;
        sc.num_actions = num_actions;
        sc.latent_dim = cfg.latent_dim;
        sc.mixture_size = cfg.mixture_size;
        sc.batch_size = cfg.batch_size;
        sc.train_every = cfg.train_every;
        sc.train_steps = cfg.train_steps;
        sc.learning_rate = cfg.learning_rate;
        sc.global_latent = cfg.agent == "lu-sivi-global";
        return std::make_unique<agents::LuSiviAgent>(sc, init_seed, act_seed, train_seed);
    }
    throw ConfigError("unknown agent: '" + cfg.agent + "'");
}

std::vector<harness::TrialResult> run_trials(const ExperimentConfig& cfg) {
    cfg.validate();
    require_run_fields(cfg, /*need_out_dir=*/false);
    return run_trials_impl(cfg, resolve_dataset(cfg));
}

int cmd_run(const ExperimentConfig& cfg) {
    cfg.validate();
    require_run_fields(cfg, /*need_out_dir=*/true);

    const ResolvedDataset ds = resolve_dataset(cfg);
    std::size_t context_dim = 0;
    std::size_t num_actions = 0;
    {
        const auto probe = make_environment(ds, cfg, 0);
        context_dim = probe->context_dim();
        num_actions = probe->num_actions();
    }
    const std::vector<harness::TrialResult> results = run_trials_impl(cfg, ds);

    ensure_dir(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    atomic_write(out / "trials.csv", render_trials_csv(cfg, results));
    atomic_write(out / "regret_curve.csv", render_regret_curve_csv(results, cfg.horizon));

    nlohmann::ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["command"] = "run";
    manifest["config"] = config_json(cfg);
    nlohmann::ordered_json derived;
    derived["environment"] = ds.id;
    derived["context_dim"] = context_dim;
    derived["num_actions"] = num_actions;
    derived["latent_dim"] = cfg.latent_dim;
    derived["mixture_size"] = cfg.mixture_size;
    manifest["derived"] = derived;
    atomic_write(out / "manifest.json", manifest.dump(2) + "\n");
    return 0;
}

int cmd_aggregate(const std::vector<std::string>& result_dirs, const std::string& out_dir) {
    if (result_dirs.empty()) {
        throw ConfigError("aggregate requires at least one result directory");
    }
    if (out_dir.empty()) throw ConfigError("missing required field: out");

    std::vector<harness::TrialResult> all;
    std::map<std::string, std::uint64_t> horizon_by_dataset;
    for (const std::string& dir : result_dirs) {
        const std::string manifest_path = dir + "/manifest.json";
        std::ifstream min(manifest_path);
        if (!min) throw DataError("cannot open '" + manifest_path + "'");
        std::string dataset;
        std::uint64_t horizon = 0;
        try {
            const auto j = nlohmann::json::parse(min);
            dataset = j.at("config").at("dataset").get<std::string>();
            horizon = j.at("config").at("horizon").get<std::uint64_t>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError(manifest_path + ": " + e.what());
        }
        const auto [it, inserted] = horizon_by_dataset.emplace(dataset, horizon);
        if (!inserted && it->second != horizon) {
            throw DataError("mismatched horizons for dataset '" + dataset + "': " +
                            std::to_string(it->second) + " vs " + std::to_string(horizon));
        }

        const std::string trials_path = dir + "/trials.csv";
        std::ifstream tin(trials_path);
        if (!tin) throw DataError("cannot open '" + trials_path + "'");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(tin, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (lineno == 1) {
                if (line != kTrialsHeader) {
                    throw DataError(trials_path + ": unexpected header '" + line + "'");
                }
                continue;
            }
            if (line.empty()) continue;
            const std::vector<std::string> f = split_csv(line);
            if (f.size() != 7) {
                throw DataError(trials_path + " line " + std::to_string(lineno) +
                                ": expected 7 fields, got " + std::to_string(f.size()));
            }
            harness::TrialResult r;
            r.trial_index =
                static_cast<std::size_t>(parse_csv_u64(trials_path, lineno, f[0]));
            r.dataset_id = f[1];
            r.agent_id = f[2];
            r.master_seed = parse_csv_u64(trials_path, lineno, f[3]);
            r.cumulative_regret = parse_csv_double(trials_path, lineno, f[5]);
            // A one-step trajectory holding the stored simple regret: the
            // aggregate window then reproduces it exactly, while cumulative
            // regret drives normalization.
            r.step_regret = {parse_csv_double(trials_path, lineno, f[6])};
            all.push_back(std::move(r));
        }
    }

    const harness::AggregateReport report = harness::aggregate(all);

    std::string csv =
        "kind,dataset,agent,trials,mean_cr,se_cr,mean_normalized,se_normalized,"
        "mean_simple_regret,se_simple_regret,mean_rank,mean_value\n";
    for (const harness::CellStats& c : report.cells) {
        csv += "cell," + c.dataset_id + ',' + c.agent_id + ',' + std::to_string(c.trials) +
               ',' + fmt(c.mean_cr) + ',' + fmt(c.se_cr) + ',' + fmt(c.mean_normalized) +
               ',' + fmt(c.se_normalized) + ',' + fmt(c.mean_simple_regret) + ',' +
               fmt(c.se_simple_regret) + ",,\n";
    }
    for (const harness::AgentSummary& a : report.agents) {
        csv += "summary,," + a.agent_id + ",,,,,,,," + fmt(a.mean_rank) + ',' +
               fmt(a.mean_value) + '\n';
    }

    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["baseline"] = report.baseline_id;
    j["normalization"] = "100 * cell CR mean / baseline CR mean";
    j["datasets"] = report.dataset_ids;
    j["cells"] = nlohmann::ordered_json::array();
    for (const harness::CellStats& c : report.cells) {
        nlohmann::ordered_json jc;
        jc["dataset"] = c.dataset_id;
        jc["agent"] = c.agent_id;
        jc["trials"] = c.trials;
        jc["mean_cr"] = c.mean_cr;
        jc["se_cr"] = c.se_cr;
        jc["mean_normalized"] = c.mean_normalized;
        jc["se_normalized"] = c.se_normalized;
        jc["mean_simple_regret"] = c.mean_simple_regret;
        jc["se_simple_regret"] = c.se_simple_regret;
        j["cells"].push_back(jc);
    }
    j["agents"] = nlohmann::ordered_json::array();
    for (const harness::AgentSummary& a : report.agents) {
        nlohmann::ordered_json ja;
        ja["agent"] = a.agent_id;
        ja["mean_rank"] = a.mean_rank;
        ja["mean_value"] = a.mean_value;
        j["agents"].push_back(ja);
    }

    ensure_dir(out_dir);
    const fs::path out(out_dir);
    atomic_write(out / "report.csv", csv);
    atomic_write(out / "report.json", j.dump(2) + "\n");
    return 0;
}

int cmd_trace(const ExperimentConfig& cfg, const TraceRequest& req) {
    cfg.validate();
    require_run_fields(cfg, /*need_out_dir=*/true);

    const ResolvedDataset ds = resolve_dataset(cfg);
    auto context_env = make_environment(ds, cfg, 0);
    const std::size_t context_dim = context_env->context_dim();
    const std::size_t num_actions = context_env->num_actions();

    auto agent = make_agent(cfg, context_dim, num_actions, 0);
    auto* lu = dynamic_cast<agents::LocalUncertaintyAgent*>(agent.get());
    if (lu == nullptr) {
        throw ConfigError("unsupported agent for trace: '" + cfg.agent +
                          "' (trace needs latent mean-reward sampling)");
    }

    std::vector<nd::Tensor> contexts;
    harness::TraceMode mode;
    if (req.per_context > 0) {
        mode = harness::TraceMode::kOnePerContext;
        contexts.reserve(req.per_context);
        for (std::size_t i = 0; i < req.per_context; ++i) {
            contexts.push_back(context_env->next().context);
        }
    } else {
        mode = harness::TraceMode::kRepeatedDraws;
        nd::Tensor picked;
        for (std::size_t i = 0; i <= req.context_row; ++i) picked = context_env->next().context;
        contexts.push_back(std::move(picked));
    }

    // Fresh environment with the same stream: the interaction replays the
    // very context sequence the selector just scanned.
    auto run_env = make_environment(ds, cfg, 0);
    harness::TraceOptions opts;
    opts.horizon = cfg.horizon;
    opts.record_every = req.record_every;
    opts.samples = req.samples;
    opts.bins = req.bins;
    const harness::HistogramTrace trace =
        harness::trace_histogram(*run_env, *lu, contexts, req.action, mode, opts);

    std::string csv = "step,bin_left,bin_right,count\n";
    for (std::size_t r = 0; r < trace.steps.size(); ++r) {
        for (std::size_t b = 0; b + 1 < trace.bin_edges.size(); ++b) {
            csv += std::to_string(trace.steps[r]) + ',' + fmt(trace.bin_edges[b]) + ',' +
                   fmt(trace.bin_edges[b + 1]) + ',' + std::to_string(trace.counts[r][b]) +
                   '\n';
        }
    }
    ensure_dir(cfg.out_dir);
    atomic_write(fs::path(cfg.out_dir) / "trace.csv", csv);
    return 0;
}

namespace {

// Registers one string-valued flag per config key on `sub`; after parsing,
// assemble() folds the flags that were actually given into the config, so
// flags win over the file along the single apply() path.
struct ConfigFlags {
    std::vector<std::string> values;
    std::vector<CLI::Option*> options;

    explicit ConfigFlags(CLI::App* sub) {
        const auto& keys = ExperimentConfig::keys();
        values.resize(keys.size());
        options.reserve(keys.size());
        for (std::size_t i = 0; i < keys.size(); ++i) {
            options.push_back(sub->add_option("--" + keys[i], values[i]));
        }
    }

    ExperimentConfig assemble(const std::string& config_path) const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = ExperimentConfig::load(config_path);
        const auto& keys = ExperimentConfig::keys();
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (options[i]->count() > 0) cfg.apply(keys[i], values[i]);
        }
        return cfg;
    }
};

}  // namespace

int dispatch(int argc, char** argv) {
    CLI::App app{"bandit-lab: seeded contextual bandit experiments"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "execute trials and write result files");
    std::string run_config;
    run->add_option("--config", run_config, "key=value config file");
    const ConfigFlags run_flags(run);

    CLI::App* agg =
        app.add_subcommand("aggregate", "combine result directories into a report");
    std::vector<std::string> agg_dirs;
    std::string agg_out;
    agg->add_option("dirs", agg_dirs, "result directories (each with trials.csv + manifest.json)")
        ->required();
    agg->add_option("--out", agg_out, "output directory")->required();

    CLI::App* trace =
        app.add_subcommand("trace", "histogram trace of sampled mean rewards");
    std::string trace_config;
    trace->add_option("--config", trace_config, "key=value config file");
    const ConfigFlags trace_flags(trace);
    TraceRequest treq;
    trace->add_option("--action", treq.action, "action whose sampled means are traced");
    trace->add_option("--context_row", treq.context_row,
                      "row of the context stream to pin (repeated-draw mode)");
    trace->add_option("--per_context", treq.per_context,
                      "instead: one draw per context over this many rows");
    trace->add_option("--samples", treq.samples, "draws per recorded step");
    trace->add_option("--bins", treq.bins, "histogram bins");
    trace->add_option("--record_every", treq.record_every, "steps between recordings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags.assemble(run_config));
        if (agg->parsed()) return cmd_aggregate(agg_dirs, agg_out);
        if (trace->parsed()) return cmd_trace(trace_flags.assemble(trace_config), treq);
        std::cerr << "no command given\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace banditlab::cli
