#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "pixgym/env.hpp"
#include "pixgym/policy.hpp"
#include "pixgym/value.hpp"

namespace pixgym {

struct MctsConfig {
    std::size_t rounds = 16;  // K
    double c = 0.1;
    double lambda = 0.1;
    std::size_t k = 8;
    std::size_t rollout_max = 20;
    std::size_t value_top_n = 3;
    SurrogateConfig surrogate;

    void validate() const;
};

struct SearchNode;

struct Edge {
    Action action;
    std::string text;  // serialized action, for tie-breaks
    double prior = 0.0;
    std::size_t n = 0;
    double q = 0.0;
    std::unique_ptr<SearchNode> child;
};

struct SearchNode {
    EnvState state;
    Observation obs;
    bool terminal = false;  // episode over, or no actions to expand
    double value = 0.0;     // leaf evaluation at creation
    std::size_t visits = 1;  // N(s): creation plus one per traversal through it
    std::vector<Edge> edges;
};

/// U(s, a) = c * p * sqrt(N(s)) / (1 + n(s, a)).
double exploration_bonus(double prior, std::size_t parent_visits, std::size_t edge_visits, double c);

/// Index of the edge maximising Q + U. Throws NoEdges.
std::size_t select_child(const SearchNode& node, const MctsConfig& cfg);

/// One edge per beam entry, Q = leaf_value + alpha, n = 0.
void init_edges(SearchNode& node, const std::vector<ScoredAction>& beam, double leaf_value, const MctsConfig& cfg);

struct PathStep {
    SearchNode* node;
    std::size_t edge;
};

/// Credits one round. The edge at depth d receives
/// (path.size() - d) * alpha + leaf_value.
void backup(const std::vector<PathStep>& path, double leaf_value, const MctsConfig& cfg);

/// Index of the most visited root edge (ties: higher Q, higher prior, text).
std::size_t most_visited(const SearchNode& node);

/// Throws RangeError naming the first node where N != sum(n) + 1.
void check_conservation(const SearchNode& node);

struct SearchResult {
    Action action;
    std::size_t edge = 0;
    std::size_t rounds_run = 0;
    std::unique_ptr<SearchNode> root;

    /// Detaches the chosen child for reuse on the next step (may be null).
    std::unique_ptr<SearchNode> take_subtree();
};

/// Search policy. Immutable apart from its arguments; one instance may be
/// shared across threads as long as each tree is used by one thread.
class TreeSearch {
public:
    TreeSearch(const Env& env, std::shared_ptr<const ActionScorer> scorer, std::shared_ptr<const ValueFn> value,
               MctsConfig cfg = {});

    const MctsConfig& config() const { return cfg_; }

    /// Clipped surrogate return of a fresh greedy policy from the state.
    double rollout(const EnvState& state, const Observation& obs) const;
    /// lambda * v_hat + (1 - lambda) * rollout for non-terminal states.
    double evaluate_leaf(const EnvState& state, const Observation& obs) const;
    /// Creates, evaluates and expands a node.
    std::unique_ptr<SearchNode> make_node(EnvState state, Observation obs) const;

    /// Runs rounds until the root holds K visits of credit, then picks the
    /// most visited action. A `reused` node matching the root state keeps its
    /// statistics. Throws TerminalStateError / EmptyBeam at the root.
    SearchResult search_act(const EnvState& state, const Observation& obs,
                            std::unique_ptr<SearchNode> reused = nullptr) const;

private:
    void run_round(SearchNode& root) const;

    const Env* env_;
    std::shared_ptr<const ActionScorer> scorer_;
    std::shared_ptr<const ValueFn> value_;
    MctsConfig cfg_;
};

}  // namespace pixgym
