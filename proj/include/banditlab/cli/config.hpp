#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace banditlab::cli {

// Everything a run needs, flattened to scalar fields so a config can live in
// a diffable key=value file.  The same `apply` path handles both file lines
// and command-line flag overrides, so flags and files cannot drift.
struct ExperimentConfig {
    std::string dataset;      // built-in id or basename resolved under the data root
    std::string data_path;    // explicit data file (overrides root lookup)
    std::string schema_path;  // explicit schema file (overrides root lookup)
    std::string agent;
    std::string out_dir;
    std::size_t horizon = 2000;
    std::size_t trials = 5;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;

    // Agent hyperparameters (consumed by the agents that use them).
    std::size_t latent_dim = 50;    // H
    std::size_t mixture_size = 50;  // K
    std::size_t train_every = 20;
    std::size_t train_steps = 40;
    std::size_t batch_size = 512;
    double learning_rate = 1e-3;
    double nig_a0 = 6.0;
    double nig_b0 = 6.0;
    double nig_lambda = 0.25;
    double wheel_delta = 0.5;

    // Canonical key order, shared by serialize() and the CLI flag set.
    static const std::vector<std::string>& keys();

    // Set one field from its textual form.  Unknown key or unparseable
    // value -> ConfigError naming the field.
    void apply(const std::string& key, const std::string& value);

    // Textual form of one field (doubles at full round-trip precision).
    std::string get(const std::string& key) const;

    // key=value lines in keys() order; parse(serialize()) == *this.
    std::string serialize() const;

    static ExperimentConfig parse(std::istream& in);
    static ExperimentConfig load(const std::string& path);

    // Range checks on the numeric fields (presence of dataset/agent/out_dir
    // is a per-command requirement, checked by the commands).
    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace banditlab::cli
