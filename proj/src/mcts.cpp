#include "pixgym/mcts.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pixgym/errors.hpp"

namespace pixgym {

void MctsConfig::validate() const {
    if (rounds < 1) throw RangeError("K must be at least 1");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw RangeError("lambda outside [0, 1]");
    if (!(c >= 0.0)) throw RangeError("c must be non-negative");
    if (k < 1) throw RangeError("k must be at least 1");
    if (value_top_n < 1) throw RangeError("value_top_n must be at least 1");
}

double exploration_bonus(double prior, std::size_t parent_visits, std::size_t edge_visits, double c) {
    return c * prior * std::sqrt(static_cast<double>(parent_visits)) / (1.0 + static_cast<double>(edge_visits));
}

namespace {

// True when `a` should be preferred to `b` after the primary key ties.
bool prefer_on_tie(const Edge& a, const Edge& b) {
    if (a.prior != b.prior) return a.prior > b.prior;
    return a.text < b.text;
}

}  // namespace

std::size_t select_child(const SearchNode& node, const MctsConfig& cfg) {
    if (node.edges.empty()) throw NoEdges("node has no edges");
    std::size_t best = 0;
    double best_score = -INFINITY;
    for (std::size_t i = 0; i < node.edges.size(); ++i) {
        const Edge& e = node.edges[i];
        const double score = e.q + exploration_bonus(e.prior, node.visits, e.n, cfg.c);
        if (score > best_score || (score == best_score && prefer_on_tie(e, node.edges[best]))) {
            best = i;
            best_score = score;
        }
    }
    return best;
}

void init_edges(SearchNode& node, const std::vector<ScoredAction>& beam, double leaf_value, const MctsConfig& cfg) {
    node.edges.clear();
    for (const auto& sa : beam) {
        Edge e;
        e.action = sa.action;
        e.text = serialize_action(sa.action);
        e.prior = sa.score;
        e.q = leaf_value + cfg.surrogate.step_penalty;
        node.edges.push_back(std::move(e));
    }
}

void backup(const std::vector<PathStep>& path, double leaf_value, const MctsConfig& cfg) {
    for (std::size_t d = 0; d < path.size(); ++d) {
        Edge& e = path[d].node->edges.at(path[d].edge);
        const double ret = static_cast<double>(path.size() - d) * cfg.surrogate.step_penalty + leaf_value;
        ++e.n;
        // The running mean overwrites the initial Q on the first visit.
        e.q += (ret - e.q) / static_cast<double>(e.n);
        ++path[d].node->visits;
    }
}

std::size_t most_visited(const SearchNode& node) {
    if (node.edges.empty()) throw NoEdges("node has no edges");
    std::size_t best = 0;
    for (std::size_t i = 1; i < node.edges.size(); ++i) {
        const Edge& a = node.edges[i];
        const Edge& b = node.edges[best];
        if (a.n != b.n) {
            if (a.n > b.n) best = i;
        } else if (a.q != b.q) {
            if (a.q > b.q) best = i;
        } else if (prefer_on_tie(a, b)) {
            best = i;
        }
    }
    return best;
}

void check_conservation(const SearchNode& node) {
    std::size_t sum = 0;
    for (const auto& e : node.edges) {
        sum += e.n;
        if (e.child) check_conservation(*e.child);
    }
    if (node.visits != sum + 1) {
        throw RangeError("visit conservation broken at step " + std::to_string(node.state.steps_taken) + ": N=" +
                         std::to_string(node.visits) + " sum(n)=" + std::to_string(sum));
    }
}

std::unique_ptr<SearchNode> SearchResult::take_subtree() {
    if (!root || edge >= root->edges.size()) return nullptr;
    return std::move(root->edges[edge].child);
}

TreeSearch::TreeSearch(const Env& env, std::shared_ptr<const ActionScorer> scorer,
                       std::shared_ptr<const ValueFn> value, MctsConfig cfg)
    : env_(&env), scorer_(std::move(scorer)), value_(std::move(value)), cfg_(cfg) {
    cfg_.validate();
    if (!scorer_) throw std::invalid_argument("null scorer");
    if (!value_ && cfg_.lambda > 0.0) throw std::invalid_argument("null value function with lambda > 0");
}

double TreeSearch::rollout(const EnvState& state, const Observation& obs) const {
    TakenMap taken;  // a fresh greedy policy per rollout
    EnvState s = state;
    Observation o = obs;
    double ret = 0.0;
    for (std::size_t t = 0; t < cfg_.rollout_max && !s.done; ++t) {
        const auto beam = scorer_->top_k(s, o, cfg_.k);
        if (beam.empty()) break;
        auto [next, r] = env_->step(s, greedy_select(beam, o.digest, taken));
        ret += surrogate_step(r.done, r.raw_reward.value_or(0.0), r.incomplete, cfg_.surrogate);
        s = std::move(next);
        o = std::move(r.observation);
    }
    return std::max(0.0, ret);
}

double TreeSearch::evaluate_leaf(const EnvState& state, const Observation& obs) const {
    double v = 0.0;
    if (cfg_.lambda > 0.0) v += cfg_.lambda * estimate_value(*value_, state, obs, cfg_.value_top_n);
    if (cfg_.lambda < 1.0) v += (1.0 - cfg_.lambda) * rollout(state, obs);
    return v;
}

std::unique_ptr<SearchNode> TreeSearch::make_node(EnvState state, Observation obs) const {
    auto node = std::make_unique<SearchNode>();
    node->state = std::move(state);
    node->obs = std::move(obs);
    if (node->state.done) {
        node->terminal = true;
        node->value = surrogate_terminal(node->state.task.raw, node->state.incomplete, cfg_.surrogate);
        return node;
    }
    const auto beam = scorer_->top_k(node->state, node->obs, cfg_.k);
    if (beam.empty()) {
        node->terminal = true;
        node->value = 0.0;
        return node;
    }
    node->value = evaluate_leaf(node->state, node->obs);
    init_edges(*node, beam, node->value, cfg_);
    return node;
}

void TreeSearch::run_round(SearchNode& root) const {
    std::vector<PathStep> path;
    SearchNode* node = &root;
    double leaf_value = 0.0;
    while (true) {
        if (node->terminal) {
            leaf_value = node->value;
            break;
        }
        const std::size_t i = select_child(*node, cfg_);
        path.push_back({node, i});
        Edge& e = node->edges[i];
        if (!e.child) {
            auto [next, r] = env_->step(node->state, e.action);
            e.child = make_node(std::move(next), std::move(r.observation));
            leaf_value = e.child->value;
            break;
        }
        node = e.child.get();
    }
    backup(path, leaf_value, cfg_);
}

SearchResult TreeSearch::search_act(const EnvState& state, const Observation& obs,
                                    std::unique_ptr<SearchNode> reused) const {
    if (state.done) throw TerminalStateError("search from a finished state");
    std::unique_ptr<SearchNode> root;
    bool reusing = false;
    if (reused && !reused->terminal && reused->state == state) {
        root = std::move(reused);
        reusing = true;
    } else {
        root = make_node(state, obs);
    }
    if (root->edges.empty()) throw EmptyBeam("scorer returned no actions at the root");

    // A reused child arrives with N = n(s, a) rounds of credit; a fresh root has none.
    const std::size_t credit = reusing ? root->visits : 0;
    const std::size_t rounds = cfg_.rounds > credit ? cfg_.rounds - credit : 0;
    for (std::size_t r = 0; r < rounds; ++r) run_round(*root);

    SearchResult out;
    out.edge = most_visited(*root);
    out.action = root->edges[out.edge].action;
    out.rounds_run = rounds;
    out.root = std::move(root);
    return out;
}

}  // namespace pixgym
