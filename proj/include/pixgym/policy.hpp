#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixgym/action.hpp"
#include "pixgym/demo.hpp"
#include "pixgym/env.hpp"

namespace pixgym {

struct ScoredAction {
    Action action;
    double score = 0.0;  // approximate p(a | s)
};

/// Top-k action proposals for a state. Learned scorers look only at the
/// observation; scripted scorers may also read the environment state.
/// Implementations are immutable after construction and thread-safe.
class ActionScorer {
public:
    virtual ~ActionScorer() = default;
    /// At most k actions, sorted by score descending.
    virtual std::vector<ScoredAction> top_k(const EnvState& state, const Observation& obs,
                                            std::size_t k) const = 0;
};

/// log_prob / length^0.6, the beam-search length normalisation.
double length_normalized_score(double log_prob, std::size_t length);

/// Serialized actions already taken, per observation digest.
using TakenMap = std::unordered_map<Digest, std::set<std::string>>;

/// Highest-scored beam action not yet taken on `d`, falling back to the beam
/// head when every action has been taken. Records the choice in `taken`.
Action greedy_select(const std::vector<ScoredAction>& beam, Digest d, TakenMap& taken);

class GreedyPolicy {
public:
    explicit GreedyPolicy(std::shared_ptr<const ActionScorer> scorer, std::size_t k = 8);

    Action select(const EnvState& state, const Observation& obs);
    /// Clears the cycle-prevention memory; call at episode start.
    void reset() { taken_.clear(); }

    const TakenMap& taken() const { return taken_; }
    std::size_t k() const { return k_; }

private:
    std::shared_ptr<const ActionScorer> scorer_;
    std::size_t k_;
    TakenMap taken_;
};

/// Next oracle action at ~0.99 plus k-1 distractors sharing the rest.
/// Distractors prefer points on the wrong widgets, then empty space.
/// `env` must outlive the scorer.
std::shared_ptr<const ActionScorer> oracle_scorer(const Env& env);

/// Like oracle_scorer, but on a deterministic epsilon fraction of states
/// (keyed on digest and noise_seed) the head swaps scores with a distractor.
std::shared_ptr<const ActionScorer> noisy_oracle_scorer(const Env& env, double epsilon, std::uint64_t noise_seed);

/// The distractor pool used by the oracle scorers (exposed for tests).
std::vector<Action> oracle_distractors(const Env& env, const EnvState& state, Digest d, const Action& head,
                                       std::size_t count);

/// Behavioural cloning by counting: per-digest empirical action distribution.
class TabularScorer final : public ActionScorer {
public:
    using Counts = std::map<std::string, std::size_t>;

    TabularScorer(std::unordered_map<Digest, Counts> table, BinConfig bins);

    std::vector<ScoredAction> top_k(const EnvState& state, const Observation& obs, std::size_t k) const override;
    std::vector<ScoredAction> top_k(Digest d, std::size_t k) const;

    bool contains(Digest d) const { return table_.count(d) > 0; }
    std::size_t size() const { return table_.size(); }

    /// {"<16-hex digest>": {"<action>": count}}
    nlohmann::json to_json() const;
    static std::shared_ptr<TabularScorer> from_json(const nlohmann::json& j, const BinConfig& bins);

private:
    std::vector<ScoredAction> rank(const Counts& counts, std::size_t k) const;

    std::unordered_map<Digest, Counts> table_;
    Counts global_;
    BinConfig bins_;
    std::unordered_map<std::string, Action> parsed_;
};

using BcDataset = std::vector<std::pair<Digest, std::string>>;

/// Throws EmptyDataset.
std::shared_ptr<TabularScorer> tabular_bc_fit(const BcDataset& dataset, const BinConfig& bins);

/// (digest, action) pairs of every step in the demos.
BcDataset bc_dataset(const std::vector<DemoEpisode>& demos);

}  // namespace pixgym
