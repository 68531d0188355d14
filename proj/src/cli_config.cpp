#include "banditlab/cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "banditlab/errors.hpp"

namespace banditlab::cli {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" +
                          value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    return static_cast<std::uint64_t>(parse_size(key, value));
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::keys() {
    static const std::vector<std::string> k = {
        "dataset",     "data_path",     "schema_path", "agent",       "out_dir",
        "horizon",     "trials",        "seed",        "jobs",        "latent_dim",
        "mixture_size", "train_every",  "train_steps", "batch_size",  "learning_rate",
        "nig_a0",      "nig_b0",        "nig_lambda",  "wheel_delta",
    };
    return k;
}

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    if (key == "dataset") dataset = value;
    else if (key == "data_path") data_path = value;
    else if (key == "schema_path") schema_path = value;
    else if (key == "agent") agent = value;
    else if (key == "out_dir") out_dir = value;
    else if (key == "horizon") horizon = parse_size(key, value);
    else if (key == "trials") trials = parse_size(key, value);
    else if (key == "seed") seed = parse_u64(key, value);
    else if (key == "jobs") jobs = parse_size(key, value);
    else if (key == "latent_dim") latent_dim = parse_size(key, value);
    else if (key == "mixture_size") mixture_size = parse_size(key, value);
    else if (key == "train_every") train_every = parse_size(key, value);
    else if (key == "train_steps") train_steps = parse_size(key, value);
    else if (key == "batch_size") batch_size = parse_size(key, value);
    else if (key == "learning_rate") learning_rate = parse_double(key, value);
    else if (key == "nig_a0") nig_a0 = parse_double(key, value);
    else if (key == "nig_b0") nig_b0 = parse_double(key, value);
    else if (key == "nig_lambda") nig_lambda = parse_double(key, value);
    else if (key == "wheel_delta") wheel_delta = parse_double(key, value);
    else throw ConfigError("unknown config key: '" + key + "'");
}

std::string ExperimentConfig::get(const std::string& key) const {
    if (key == "dataset") return dataset;
    if (key == "data_path") return data_path;
    if (key == "schema_path") return schema_path;
    if (key == "agent") return agent;
    if (key == "out_dir") return out_dir;
    if (key == "horizon") return std::to_string(horizon);
    if (key == "trials") return std::to_string(trials);
    if (key == "seed") return std::to_string(seed);
    if (key == "jobs") return std::to_string(jobs);
    if (key == "latent_dim") return std::to_string(latent_dim);
    if (key == "mixture_size") return std::to_string(mixture_size);
    if (key == "train_every") return std::to_string(train_every);
    if (key == "train_steps") return std::to_string(train_steps);
    if (key == "batch_size") return std::to_string(batch_size);
    if (key == "learning_rate") return format_double(learning_rate);
    if (key == "nig_a0") return format_double(nig_a0);
    if (key == "nig_b0") return format_double(nig_b0);
    if (key == "nig_lambda") return format_double(nig_lambda);
    if (key == "wheel_delta") return format_double(wheel_delta);
    throw ConfigError("unknown config key: '" + key + "'");
}

std::string ExperimentConfig::serialize() const {
    std::string out;
    for (const std::string& k : keys()) {
        out += k;
        out += '=';
        out += get(k);
        out += '\n';
    }
    return out;
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        }
        cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    return parse(in);
}

void ExperimentConfig::validate() const {
    if (horizon == 0) throw ConfigError("horizon must be >= 1");
    if (trials == 0) throw ConfigError("trials must be >= 1");
    if (jobs == 0) throw ConfigError("jobs must be >= 1");
    if (latent_dim == 0) throw ConfigError("latent_dim must be >= 1");
    if (mixture_size == 0) throw ConfigError("mixture_size must be >= 1");
    if (train_every == 0) throw ConfigError("train_every must be >= 1");
    if (train_steps == 0) throw ConfigError("train_steps must be >= 1");
    if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (!(nig_a0 > 0.0)) throw ConfigError("nig_a0 must be > 0");
    if (!(nig_b0 > 0.0)) throw ConfigError("nig_b0 must be > 0");
    if (!(nig_lambda > 0.0)) throw ConfigError("nig_lambda must be > 0");
    if (!(wheel_delta >= 0.0 && wheel_delta < 1.0)) {
        throw ConfigError("wheel_delta must be in [0, 1)");
    }
}

}  // namespace banditlab::cli
