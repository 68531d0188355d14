#include "banditlab/harness/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "banditlab/errors.hpp"

namespace banditlab::harness {

void TraceOptions::validate() const {
    if (record_every == 0) throw ConfigError("trace: record_every must be positive");
    if (samples == 0) throw ConfigError("trace: samples must be positive");
    if (bins == 0) throw ConfigError("trace: bins must be positive");
}

namespace {

std::vector<double> draw_row(agents::LocalUncertaintyAgent& agent,
                             std::span<const nd::Tensor> contexts, std::size_t action,
                             TraceMode mode, std::size_t samples) {
    std::vector<double> out;
    if (mode == TraceMode::kRepeatedDraws) {
        const nd::Tensor means = agent.sample_mean_rewards(contexts[0], samples);
        out.reserve(samples);
        for (std::size_t s = 0; s < samples; ++s) out.push_back(means.at(s, action));
    } else {
        out.reserve(contexts.size());
        for (const nd::Tensor& ctx : contexts)
            out.push_back(agent.sample_mean_rewards(ctx, 1).at(0, action));
    }
    for (double v : out)
        if (!std::isfinite(v)) throw NumericError("trace: non-finite sampled mean reward");
    return out;
}

}  // namespace

HistogramTrace trace_histogram(envs::BanditEnvironment& env,
                               agents::LocalUncertaintyAgent& agent,
                               std::span<const nd::Tensor> contexts,
                               std::size_t action, TraceMode mode,
                               const TraceOptions& opts) {
    opts.validate();
    if (env.context_dim() != agent.context_dim() ||
        env.num_actions() != agent.num_actions())
        throw DimensionError("trace: env " + env.id() + " does not match agent " +
                             agent.id());
    if (action >= agent.num_actions())
        throw ConfigError("trace: action " + std::to_string(action) + " out of range");
    if (mode == TraceMode::kRepeatedDraws && contexts.size() != 1)
        throw ConfigError("trace: repeated-draw mode takes exactly one context");
    if (contexts.empty()) throw ConfigError("trace: no contexts given");
    for (const nd::Tensor& ctx : contexts)
        if (ctx.numel() != agent.context_dim())
            throw DimensionError("trace: context dimension mismatch");

    HistogramTrace trace;
    trace.steps.push_back(0);
    trace.samples.push_back(draw_row(agent, contexts, action, mode, opts.samples));

    for (std::size_t t = 1; t <= opts.horizon; ++t) {
        const envs::Round round = env.next();
        const std::size_t chosen = agent.act(round.context);
        agent.observe(round.context, chosen, round.rewards[chosen]);
        if (t % opts.record_every == 0 || t == opts.horizon) {
            trace.steps.push_back(t);
            trace.samples.push_back(draw_row(agent, contexts, action, mode, opts.samples));
        }
    }

    double lo = trace.samples[0][0];
    double hi = lo;
    for (const std::vector<double>& row : trace.samples)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > lo)) {  // degenerate spread: pad so every draw lands inside
        lo -= 0.5;
        hi += 0.5;
    }

    trace.bin_edges.reserve(opts.bins + 1);
    const double width = (hi - lo) / static_cast<double>(opts.bins);
    for (std::size_t b = 0; b <= opts.bins; ++b)
        trace.bin_edges.push_back(lo + width * static_cast<double>(b));
    trace.bin_edges.back() = hi;

    for (const std::vector<double>& row : trace.samples) {
        std::vector<std::size_t> counts(opts.bins, 0);
        for (double v : row) {
            auto b = static_cast<std::ptrdiff_t>((v - lo) / width);
            b = std::clamp<std::ptrdiff_t>(b, 0,
                                           static_cast<std::ptrdiff_t>(opts.bins) - 1);
            ++counts[static_cast<std::size_t>(b)];
        }
        trace.counts.push_back(std::move(counts));
    }
    return trace;
}

}  // namespace banditlab::harness
