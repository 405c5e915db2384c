#include "pixgym/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pixgym/errors.hpp"
#include "pixgym/rng.hpp"

namespace pixgym {

double length_normalized_score(double log_prob, std::size_t length) {
    if (length == 0) throw RangeError("length must be positive");
    return log_prob / std::pow(static_cast<double>(length), 0.6);
}

Action greedy_select(const std::vector<ScoredAction>& beam, Digest d, TakenMap& taken) {
    if (beam.empty()) throw EmptyBeam("scorer returned no actions");
    auto& seen = taken[d];
    for (const auto& sa : beam) {
        if (seen.insert(serialize_action(sa.action)).second) return sa.action;
    }
    return beam.front().action;
}

GreedyPolicy::GreedyPolicy(std::shared_ptr<const ActionScorer> scorer, std::size_t k)
    : scorer_(std::move(scorer)), k_(k) {
    if (!scorer_) throw std::invalid_argument("null scorer");
    if (k_ == 0) throw RangeError("k must be positive");
}

Action GreedyPolicy::select(const EnvState& state, const Observation& obs) {
    return greedy_select(scorer_->top_k(state, obs, k_), obs.digest, taken_);
}

namespace {

std::optional<std::size_t> topmost(const TaskState& s, Point p) {
    for (std::size_t i = s.widgets.size(); i-- > 0;) {
        if (s.widgets[i].rect.contains(p)) return i;
    }
    return std::nullopt;
}

Action same_kind(const Action& head, int x, int y) {
    if (std::holds_alternative<BeginDrag>(head)) return BeginDrag{x, y};
    if (std::holds_alternative<EndDrag>(head)) return EndDrag{x, y};
    return Click{x, y};
}

class OracleScorer final : public ActionScorer {
public:
    OracleScorer(const Env& env, double epsilon, std::uint64_t noise_seed)
        : env_(&env), epsilon_(epsilon), noise_seed_(noise_seed) {
        if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw RangeError("epsilon outside [0, 1]");
    }

    std::vector<ScoredAction> top_k(const EnvState& state, const Observation& obs, std::size_t k) const override {
        if (k == 0 || state.done) return {};
        const auto plan = env_->oracle_actions(state);
        if (plan.empty()) return {};
        const Action head = plan.front();
        const auto others = oracle_distractors(*env_, state, obs.digest, head, k - 1);

        std::vector<ScoredAction> beam;
        beam.push_back({head, others.empty() ? 1.0 : 0.99});
        for (const auto& a : others) beam.push_back({a, 0.01 / static_cast<double>(others.size())});

        if (epsilon_ > 0.0 && !others.empty()) {
            SplitMix64 rng(hash_combine(obs.digest, noise_seed_));
            if (rng.unit() < epsilon_) {
                const std::size_t j = 1 + rng.below(others.size());
                std::swap(beam[0].action, beam[j].action);
            }
        }
        return beam;
    }

private:
    const Env* env_;
    double epsilon_;
    std::uint64_t noise_seed_;
};

}  // namespace

std::vector<Action> oracle_distractors(const Env& env, const EnvState& state, Digest d, const Action& head,
                                       std::size_t count) {
    if (count == 0) return {};
    const auto& bins = env.config().bins;
    const std::string head_text = serialize_action(head);

    std::optional<std::size_t> head_widget;
    if (const auto hb = action_bins(head)) {
        if (const auto p = env.to_task(env.bin_center(hb->first, hb->second))) head_widget = topmost(state.task, *p);
    }

    std::vector<Action> letters;
    if (const auto* key = std::get_if<Key>(&head)) {
        for (char c = 'a'; c <= 'z'; ++c) {
            Key k{std::nullopt, {std::string(1, c)}};
            if (k != *key) letters.emplace_back(std::move(k));
        }
    }

    std::vector<Action> wrong_widget;
    std::vector<Action> empty;
    for (int y = 0; y < bins.y_bins; ++y) {
        for (int x = 0; x < bins.x_bins; ++x) {
            const auto p = env.to_task(env.bin_center(x, y));
            if (!p) continue;
            const auto w = topmost(state.task, *p);
            const Action a = same_kind(head, x, y);
            if (serialize_action(a) == head_text) continue;
            if (!w) {
                empty.push_back(a);
            } else if (w != head_widget) {
                wrong_widget.push_back(a);
            }
        }
    }

    SplitMix64 rng(hash_combine(d, 0xD157AC7025ULL));
    rng.shuffle(letters);
    rng.shuffle(wrong_widget);
    rng.shuffle(empty);

    std::vector<Action> out;
    for (auto* pool : {&letters, &wrong_widget, &empty}) {
        for (auto& a : *pool) {
            if (out.size() == count) return out;
            out.push_back(std::move(a));
        }
    }
    return out;
}

std::shared_ptr<const ActionScorer> oracle_scorer(const Env& env) {
    return std::make_shared<OracleScorer>(env, 0.0, 0);
}

std::shared_ptr<const ActionScorer> noisy_oracle_scorer(const Env& env, double epsilon, std::uint64_t noise_seed) {
    return std::make_shared<OracleScorer>(env, epsilon, noise_seed);
}

TabularScorer::TabularScorer(std::unordered_map<Digest, Counts> table, BinConfig bins)
    : table_(std::move(table)), bins_(bins) {
    for (const auto& [d, counts] : table_) {
        for (const auto& [text, n] : counts) {
            if (n == 0) throw FormatError("zero count for " + text);
            global_[text] += n;
            if (!parsed_.count(text)) parsed_.emplace(text, parse_action(text, bins_));
        }
    }
}

std::vector<ScoredAction> TabularScorer::rank(const Counts& counts, std::size_t k) const {
    std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
    // Counts is ordered by text, so a stable sort on count keeps ties lexicographic.
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::size_t total = 0;
    for (const auto& [_, n] : items) total += n;
    std::vector<ScoredAction> out;
    for (std::size_t i = 0; i < items.size() && i < k; ++i) {
        out.push_back({parsed_.at(items[i].first), static_cast<double>(items[i].second) / static_cast<double>(total)});
    }
    return out;
}

std::vector<ScoredAction> TabularScorer::top_k(Digest d, std::size_t k) const {
    const auto it = table_.find(d);
    return rank(it != table_.end() ? it->second : global_, k);
}

std::vector<ScoredAction> TabularScorer::top_k(const EnvState&, const Observation& obs, std::size_t k) const {
    return top_k(obs.digest, k);
}

nlohmann::json TabularScorer::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [d, counts] : table_) {
        auto& row = j[digest_hex(d)];
        for (const auto& [text, n] : counts) row[text] = n;
    }
    return j;
}

std::shared_ptr<TabularScorer> TabularScorer::from_json(const nlohmann::json& j, const BinConfig& bins) {
    if (!j.is_object()) throw FormatError("policy table must be a JSON object");
    std::unordered_map<Digest, Counts> table;
    for (const auto& [hex, row] : j.items()) {
        if (!row.is_object()) throw FormatError("policy row must be an object");
        auto& counts = table[parse_digest_hex(hex)];
        for (const auto& [text, n] : row.items()) counts[text] = n.get<std::size_t>();
    }
    return std::make_shared<TabularScorer>(std::move(table), bins);
}

std::shared_ptr<TabularScorer> tabular_bc_fit(const BcDataset& dataset, const BinConfig& bins) {
    if (dataset.empty()) throw EmptyDataset("no training pairs");
    std::unordered_map<Digest, TabularScorer::Counts> table;
    for (const auto& [d, text] : dataset) {
        validate_action(parse_action(text, bins), bins);
        ++table[d][text];
    }
    return std::make_shared<TabularScorer>(std::move(table), bins);
}

BcDataset bc_dataset(const std::vector<DemoEpisode>& demos) {
    BcDataset out;
    for (const auto& demo : demos) {
        for (const auto& step : demo.steps) out.emplace_back(step.digest, step.action);
    }
    return out;
}

}  // namespace pixgym
