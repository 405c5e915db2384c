#include "pixgym/value.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pixgym/errors.hpp"

namespace pixgym {

void ValueBuckets::validate() const {
    if (count == 0) throw RangeError("bucket count must be positive");
    if (!(hi > lo)) throw RangeError("bucket range is empty");
}

std::size_t bucketize(double v, const ValueBuckets& b) {
    const double pos = (v - b.lo) / b.width();
    // Targets such as 1 - 2/30 sit exactly on a bucket edge; nudge them up
    // so rounding noise cannot drop them into the bucket below.
    const double f = std::floor(pos + 1e-9);
    if (f < 0.0) return 0;
    if (f >= static_cast<double>(b.count)) return b.count - 1;
    return static_cast<std::size_t>(f);
}

double unbucketize(std::size_t i, const ValueBuckets& b) {
    if (i >= b.count) throw RangeError("bucket index " + std::to_string(i) + " out of range");
    return b.lo + (static_cast<double>(i) + 0.5) * b.width();
}

double surrogate_terminal(double raw, bool incomplete, const SurrogateConfig& cfg) {
    if (incomplete) return 0.0;
    return raw > cfg.success_threshold ? raw : 0.0;
}

double surrogate_step(bool done, double raw, bool incomplete, const SurrogateConfig& cfg) {
    return cfg.step_penalty + (done ? surrogate_terminal(raw, incomplete, cfg) : 0.0);
}

std::vector<double> compute_targets(std::size_t length, std::optional<double> terminal_raw,
                                    const SurrogateConfig& cfg) {
    if (!terminal_raw) throw NonTerminal("episode has no terminal reward");
    const double terminal = surrogate_terminal(*terminal_raw, false, cfg);
    std::vector<double> out(length);
    for (std::size_t t = 0; t < length; ++t) {
        out[t] = static_cast<double>(length - t) * cfg.step_penalty + terminal;
    }
    return out;
}

double expected_value(const std::vector<BucketProb>& top, const ValueBuckets& b) {
    double mass = 0.0;
    double acc = 0.0;
    for (const auto& bp : top) {
        mass += bp.p;
        acc += bp.p * unbucketize(bp.bucket, b);
    }
    if (top.empty() || !(mass > 0.0)) throw EmptyPrediction("value head returned no mass");
    return acc / mass;
}

double estimate_value(const ValueFn& v, const EnvState& state, const Observation& obs, std::size_t n) {
    return expected_value(v.top_n(state, obs, n), v.buckets());
}

TabularValueFn::TabularValueFn(std::unordered_map<Digest, Counts> table, ValueBuckets buckets)
    : table_(std::move(table)), buckets_(buckets) {
    buckets_.validate();
    for (const auto& [d, counts] : table_) {
        for (const auto& [bucket, n] : counts) {
            if (bucket >= buckets_.count) throw FormatError("bucket index out of range");
            global_[bucket] += n;
        }
    }
}

std::vector<BucketProb> TabularValueFn::top_n(Digest d, std::size_t n) const {
    const auto it = table_.find(d);
    const Counts& counts = it != table_.end() ? it->second : global_;
    std::vector<std::pair<std::size_t, std::size_t>> items(counts.begin(), counts.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::size_t total = 0;
    for (const auto& [_, c] : items) total += c;
    std::vector<BucketProb> out;
    for (std::size_t i = 0; i < items.size() && i < n; ++i) {
        out.push_back({items[i].first, static_cast<double>(items[i].second) / static_cast<double>(total)});
    }
    return out;
}

std::vector<BucketProb> TabularValueFn::top_n(const EnvState&, const Observation& obs, std::size_t n) const {
    return top_n(obs.digest, n);
}

nlohmann::json TabularValueFn::to_json() const {
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [d, counts] : table_) {
        auto& row = table[digest_hex(d)];
        for (const auto& [bucket, c] : counts) row[std::to_string(bucket)] = c;
    }
    return {{"buckets", {{"count", buckets_.count}, {"lo", buckets_.lo}, {"hi", buckets_.hi}}}, {"table", table}};
}

std::shared_ptr<TabularValueFn> TabularValueFn::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("buckets") || !j.contains("table")) throw FormatError("malformed value table");
    ValueBuckets b;
    b.count = j["buckets"].at("count").get<std::size_t>();
    b.lo = j["buckets"].at("lo").get<double>();
    b.hi = j["buckets"].at("hi").get<double>();
    std::unordered_map<Digest, Counts> table;
    for (const auto& [hex, row] : j["table"].items()) {
        auto& counts = table[parse_digest_hex(hex)];
        for (const auto& [bucket, c] : row.items()) counts[std::stoul(bucket)] = c.get<std::size_t>();
    }
    return std::make_shared<TabularValueFn>(std::move(table), b);
}

std::shared_ptr<TabularValueFn> tabular_value_fit(const std::vector<DemoEpisode>& demos, const ValueBuckets& buckets,
                                                  const SurrogateConfig& cfg) {
    buckets.validate();
    std::unordered_map<Digest, TabularValueFn::Counts> table;
    bool any = false;
    for (const auto& demo : demos) {
        const auto targets = compute_targets(demo.steps.size(), demo.raw, cfg);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            ++table[demo.steps[t].digest][bucketize(targets[t], buckets)];
            any = true;
        }
    }
    if (!any) throw EmptyDataset("no demo steps to fit on");
    return std::make_shared<TabularValueFn>(std::move(table), buckets);
}

namespace {

class OracleValueFn final : public ValueFn {
public:
    OracleValueFn(const Env& env, ValueBuckets buckets, SurrogateConfig cfg)
        : env_(&env), buckets_(buckets), cfg_(cfg) {}

    std::vector<BucketProb> top_n(const EnvState& state, const Observation&, std::size_t n) const override {
        if (n == 0) return {};
        if (state.done) return {{bucketize(0.0, buckets_), 1.0}};
        double ret = 0.0;
        EnvState s = state;
        while (!s.done) {
            const auto plan = env_->oracle_actions(s);
            if (plan.empty()) throw NoOracle("oracle has no action");
            auto [next, r] = env_->step(s, plan.front());
            ret += surrogate_step(r.done, r.raw_reward.value_or(0.0), r.incomplete, cfg_);
            s = std::move(next);
        }
        return {{bucketize(ret, buckets_), 1.0}};
    }

    const ValueBuckets& buckets() const override { return buckets_; }

private:
    const Env* env_;
    ValueBuckets buckets_;
    SurrogateConfig cfg_;
};

}  // namespace

std::shared_ptr<const ValueFn> oracle_value_fn(const Env& env, const ValueBuckets& buckets,
                                               const SurrogateConfig& cfg) {
    return std::make_shared<OracleValueFn>(env, buckets, cfg);
}

}  // namespace pixgym
