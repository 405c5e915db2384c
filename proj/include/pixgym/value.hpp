#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixgym/demo.hpp"
#include "pixgym/env.hpp"

namespace pixgym {

/// Uniform buckets over [lo, hi]; the value head predicts a bucket index.
struct ValueBuckets {
    std::size_t count = 30;
    double lo = -1.0;
    double hi = 1.0;

    double width() const { return (hi - lo) / static_cast<double>(count); }
    void validate() const;
};

/// Bucket whose interval contains v (values outside [lo, hi] clamp).
std::size_t bucketize(double v, const ValueBuckets& b);
/// Bucket centre.
double unbucketize(std::size_t i, const ValueBuckets& b);

struct SurrogateConfig {
    double step_penalty = -1.0 / 30.0;  // alpha, charged on every step
    double success_threshold = 0.8;     // terminal reward counts only above this
};

/// Terminal part of the surrogate reward: raw if raw > threshold, else 0.
double surrogate_terminal(double raw, bool incomplete, const SurrogateConfig& cfg = {});

/// Surrogate reward of one transition.
double surrogate_step(bool done, double raw, bool incomplete, const SurrogateConfig& cfg = {});

/// Discounted-free surrogate return from each of the `length` pre-action
/// states: (length - t) * alpha + terminal. Throws NonTerminal when
/// `terminal_raw` is empty.
std::vector<double> compute_targets(std::size_t length, std::optional<double> terminal_raw,
                                    const SurrogateConfig& cfg = {});

struct BucketProb {
    std::size_t bucket = 0;
    double p = 0.0;
};

/// Predicts a distribution over value buckets. Thread-safe after construction.
class ValueFn {
public:
    virtual ~ValueFn() = default;
    /// At most n buckets, sorted by probability descending.
    virtual std::vector<BucketProb> top_n(const EnvState& state, const Observation& obs, std::size_t n) const = 0;
    virtual const ValueBuckets& buckets() const = 0;
};

/// Probability-weighted mean of bucket centres, renormalised over the given
/// buckets. Throws EmptyPrediction.
double expected_value(const std::vector<BucketProb>& top, const ValueBuckets& b);
double estimate_value(const ValueFn& v, const EnvState& state, const Observation& obs, std::size_t n = 3);

/// Per-digest empirical bucket distribution, falling back to the global one.
class TabularValueFn final : public ValueFn {
public:
    using Counts = std::map<std::size_t, std::size_t>;

    TabularValueFn(std::unordered_map<Digest, Counts> table, ValueBuckets buckets);

    std::vector<BucketProb> top_n(const EnvState& state, const Observation& obs, std::size_t n) const override;
    std::vector<BucketProb> top_n(Digest d, std::size_t n) const;
    const ValueBuckets& buckets() const override { return buckets_; }
    bool contains(Digest d) const { return table_.count(d) > 0; }

    /// {"buckets": {...}, "table": {"<digest>": {"<bucket>": count}}}
    nlohmann::json to_json() const;
    static std::shared_ptr<TabularValueFn> from_json(const nlohmann::json& j);

private:
    std::unordered_map<Digest, Counts> table_;
    Counts global_;
    ValueBuckets buckets_;
};

/// Fits on every pre-action state of the demos. Throws EmptyDataset.
std::shared_ptr<TabularValueFn> tabular_value_fit(const std::vector<DemoEpisode>& demos,
                                                  const ValueBuckets& buckets = {},
                                                  const SurrogateConfig& cfg = {});

/// Exact surrogate return of following the scripted oracle from the state,
/// reported as a single bucket. `env` must outlive it.
std::shared_ptr<const ValueFn> oracle_value_fn(const Env& env, const ValueBuckets& buckets = {},
                                               const SurrogateConfig& cfg = {});

}  // namespace pixgym
