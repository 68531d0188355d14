#include "banditlab/envs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "banditlab/errors.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::envs {

namespace {

void standardize_columns(DatasetTable& table) {
    const std::size_t n = table.num_rows;
    const std::size_t d = table.context_dim;
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += table.features[r * d + c];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double u = table.features[r * d + c] - mean;
            var += u * u;
        }
        var /= static_cast<double>(n);
        const double sd = std::sqrt(var);
        for (std::size_t r = 0; r < n; ++r) {
            double& v = table.features[r * d + c];
            v = sd == 0.0 ? 0.0 : (v - mean) / sd;
        }
    }
}

}  // namespace

DatasetTable synth_mushroom_table(std::size_t rows, std::size_t num_features,
                                  std::uint64_t seed) {
    if (rows < 10 || num_features == 0) {
        throw ConfigError("synth_mushroom_table: need >= 10 rows and >= 1 feature");
    }
    Rng rng(mix_seed({seed, 0xA1u}));

    std::vector<std::size_t> levels(num_features);
    std::vector<double> weights(num_features);
    for (std::size_t j = 0; j < num_features; ++j) {
        levels[j] = 2 + rng.uniform_int(5);  // 2..6 category codes
        weights[j] = rng.normal();
    }

    // Oversample, find the median score, and keep only rows clear of the
    // decision band so the label is a clean linear threshold of the codes.
    const std::size_t pool_n = rows * 3;
    std::vector<double> pool_features(pool_n * num_features);
    std::vector<double> scores(pool_n);
    for (std::size_t r = 0; r < pool_n; ++r) {
        double s = 0.0;
        for (std::size_t j = 0; j < num_features; ++j) {
            const double code = static_cast<double>(rng.uniform_int(levels[j]));
            pool_features[r * num_features + j] = code;
            s += weights[j] * code;
        }
        scores[r] = s;
    }
    std::vector<double> sorted_scores = scores;
    std::nth_element(sorted_scores.begin(), sorted_scores.begin() + pool_n / 2,
                     sorted_scores.end());
    const double median = sorted_scores[pool_n / 2];
    double var = 0.0, mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                             static_cast<double>(pool_n);
    for (double s : scores) var += (s - mean) * (s - mean);
    const double sd = std::sqrt(var / static_cast<double>(pool_n));
    const double margin = 0.25 * sd;

    DatasetTable table;
    table.context_dim = num_features;
    table.label_names = {"edible", "poisonous"};
    for (std::size_t j = 0; j < num_features; ++j) {
        table.feature_names.push_back("f" + std::to_string(j));
    }
    for (std::size_t r = 0; r < pool_n && table.num_rows < rows; ++r) {
        if (std::fabs(scores[r] - median) < margin) continue;
        table.features.insert(table.features.end(),
                              pool_features.begin() + static_cast<std::ptrdiff_t>(
                                                          r * num_features),
                              pool_features.begin() + static_cast<std::ptrdiff_t>(
                                                          (r + 1) * num_features));
        table.labels.push_back(scores[r] > median ? 1 : 0);
        ++table.num_rows;
    }
    if (table.num_rows < rows) {
        throw NumericError("synth_mushroom_table: margin filter rejected too many rows");
    }
    standardize_columns(table);
    return table;
}

DatasetTable synth_blobs_table(std::size_t rows, std::size_t dim,
                               const std::vector<double>& class_probs,
                               double separation, std::uint64_t seed) {
    const std::size_t classes = class_probs.size();
    if (rows == 0 || dim == 0 || classes < 2) {
        throw ConfigError("synth_blobs_table: need rows, dims and >= 2 classes");
    }
    double total = 0.0;
    for (double p : class_probs) {
        if (!(p >= 0.0)) throw ConfigError("synth_blobs_table: negative class probability");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw ConfigError("synth_blobs_table: class probabilities must sum to 1");
    }
    Rng rng(mix_seed({seed, 0xB2u}));

    std::vector<double> centers(classes * dim);
    for (double& v : centers) v = rng.normal(0.0, separation);

    DatasetTable table;
    table.num_rows = rows;
    table.context_dim = dim;
    table.features.resize(rows * dim);
    table.labels.resize(rows);
    for (std::size_t k = 0; k < classes; ++k) {
        table.label_names.push_back("c" + std::to_string(k));
    }
    for (std::size_t j = 0; j < dim; ++j) {
        table.feature_names.push_back("x" + std::to_string(j));
    }
    for (std::size_t r = 0; r < rows; ++r) {
        const double u = rng.uniform();
        std::size_t k = 0;
        double cum = 0.0;
        for (; k < classes; ++k) {
            cum += class_probs[k];
            if (u < cum) break;
        }
        if (k == classes) k = classes - 1;
        table.labels[r] = static_cast<int>(k);
        for (std::size_t j = 0; j < dim; ++j) {
            table.features[r * dim + j] = centers[k * dim + j] + rng.normal();
        }
    }
    standardize_columns(table);
    return table;
}

}  // namespace banditlab::envs
