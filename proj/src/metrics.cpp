#include "banditlab/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "banditlab/errors.hpp"

namespace banditlab::harness {

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(std::span<const double> xs) {
    MeanSe out;
    const std::size_t n = xs.size();
    if (n == 0) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(n);
    if (n >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return out;
}

double baseline_mean_cr(std::span<const TrialResult> baseline) {
    if (baseline.empty()) throw DataError("normalization baseline absent");
    double sum = 0.0;
    for (const TrialResult& r : baseline) sum += r.cumulative_regret;
    const double mean = sum / static_cast<double>(baseline.size());
    if (!std::isfinite(mean) || mean == 0.0)
        throw NumericError("baseline cumulative regret mean is zero or non-finite; "
                           "normalization undefined");
    return mean;
}

// Ranks of `values` (1 = smallest); tied entries share the average of the
// positions they span.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

std::vector<double> normalized_cr(std::span<const TrialResult> results,
                                  std::span<const TrialResult> baseline_results) {
    const double denom = baseline_mean_cr(baseline_results);
    std::vector<double> out;
    out.reserve(results.size());
    for (const TrialResult& r : results)
        out.push_back(100.0 * r.cumulative_regret / denom);
    return out;
}

double simple_regret(const TrialResult& result, std::size_t window) {
    if (window == 0) throw ConfigError("simple_regret: window must be positive");
    if (result.step_regret.size() < window)
        throw ConfigError("simple_regret: trial has " +
                          std::to_string(result.step_regret.size()) +
                          " steps, window needs " + std::to_string(window));
    double sum = 0.0;
    for (std::size_t t = result.step_regret.size() - window;
         t < result.step_regret.size(); ++t)
        sum += result.step_regret[t];
    return sum / static_cast<double>(window);
}

AggregateReport aggregate(std::span<const TrialResult> results,
                          const std::string& baseline_id) {
    if (results.empty()) throw DataError("aggregate: no trials");

    // Group into cells; map keys give a deterministic dataset/agent order.
    std::map<std::string, std::map<std::string, std::vector<const TrialResult*>>> cells;
    std::set<std::string> agent_ids;
    for (const TrialResult& r : results) {
        if (r.step_regret.empty())
            throw DataError("aggregate: trial with empty regret trajectory (" +
                            r.dataset_id + ", " + r.agent_id + ")");
        cells[r.dataset_id][r.agent_id].push_back(&r);
        agent_ids.insert(r.agent_id);
    }

    std::string missing;
    for (const auto& [dataset, by_agent] : cells)
        for (const std::string& agent : agent_ids)
            if (!by_agent.contains(agent))
                missing += (missing.empty() ? "" : ", ") + dataset + "/" + agent;
    if (!missing.empty())
        throw DataError("aggregate: missing results for cells: " + missing);
    if (!agent_ids.contains(baseline_id))
        throw DataError("normalization baseline absent");

    AggregateReport report;
    report.baseline_id = baseline_id;

    // Per-agent normalized means per dataset, in dataset iteration order.
    std::map<std::string, std::vector<double>> normalized_by_agent;
    for (auto& [dataset, by_agent] : cells) {
        report.dataset_ids.push_back(dataset);
        // Input permutation must not change any reduction, so order each
        // cell's trials before touching them.
        for (auto& [agent, trials] : by_agent)
            std::sort(trials.begin(), trials.end(),
                      [](const TrialResult* a, const TrialResult* b) {
                          return std::tie(a->trial_index, a->master_seed) <
                                 std::tie(b->trial_index, b->master_seed);
                      });

        std::vector<double> baseline_cr;
        for (const TrialResult* r : by_agent.at(baseline_id))
            baseline_cr.push_back(r->cumulative_regret);
        double bsum = 0.0;
        for (double c : baseline_cr) bsum += c;
        const double base_mean = bsum / static_cast<double>(baseline_cr.size());
        if (!std::isfinite(base_mean) || base_mean == 0.0)
            throw NumericError("baseline cumulative regret mean is zero or non-finite; "
                               "normalization undefined");

        for (const auto& [agent, trials] : by_agent) {
            CellStats cell;
            cell.dataset_id = dataset;
            cell.agent_id = agent;
            cell.trials = trials.size();

            std::vector<double> cr, norm, simple;
            for (const TrialResult* r : trials) {
                cr.push_back(r->cumulative_regret);
                norm.push_back(100.0 * r->cumulative_regret / base_mean);
                const std::size_t window =
                    std::min<std::size_t>(kSimpleRegretWindow, r->step_regret.size());
                simple.push_back(simple_regret(*r, window));
            }
            const MeanSe cr_stats = mean_se(cr);
            cell.mean_cr = cr_stats.mean;
            cell.se_cr = cr_stats.se;
            // Ratio of means, not mean of ratios: makes the baseline's own
            // cell come out at exactly 100.
            cell.mean_normalized = 100.0 * (cr_stats.mean / base_mean);
            cell.se_normalized = mean_se(norm).se;
            const MeanSe simple_stats = mean_se(simple);
            cell.mean_simple_regret = simple_stats.mean;
            cell.se_simple_regret = simple_stats.se;
            report.cells.push_back(cell);
            normalized_by_agent[agent].push_back(cell.mean_normalized);
        }
    }

    // Ranks per dataset over the agents' normalized means.
    std::map<std::string, double> rank_sum;
    const std::size_t num_datasets = report.dataset_ids.size();
    for (std::size_t d = 0; d < num_datasets; ++d) {
        std::vector<double> values;
        std::vector<std::string> agents_in_order;
        for (const auto& [agent, per_dataset] : normalized_by_agent) {
            values.push_back(per_dataset[d]);
            agents_in_order.push_back(agent);
        }
        const std::vector<double> ranks = average_ranks(values);
        for (std::size_t i = 0; i < ranks.size(); ++i)
            rank_sum[agents_in_order[i]] += ranks[i];
    }

    for (const auto& [agent, per_dataset] : normalized_by_agent) {
        AgentSummary summary;
        summary.agent_id = agent;
        summary.mean_rank = rank_sum[agent] / static_cast<double>(num_datasets);
        double sum = 0.0;
        for (double v : per_dataset) sum += v;
        summary.mean_value = sum / static_cast<double>(per_dataset.size());
        report.agents.push_back(summary);
    }
    std::sort(report.agents.begin(), report.agents.end(),
              [](const AgentSummary& a, const AgentSummary& b) {
                  return std::tie(a.mean_rank, a.agent_id) <
                         std::tie(b.mean_rank, b.agent_id);
              });
    return report;
}

}  // namespace banditlab::harness
