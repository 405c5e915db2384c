// pixgym command-line front end.
#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pixgym/agent.hpp"
#include "pixgym/demo_store.hpp"
#include "pixgym/errors.hpp"
#include "pixgym/eval.hpp"
#include "pixgym/improve.hpp"
#include "pixgym/png_codec.hpp"
#include "pixgym/session.hpp"

using namespace pixgym;

namespace {

// Policy selection shared by eval, search-improve and improve.
struct PolicyOptions {
    std::string policy = "oracle";  // oracle | noisy | table
    std::string policy_file;
    double epsilon = 0.3;
    std::uint64_t noise_seed = 0;

    void add(CLI::App& app) {
        app.add_option("--policy", policy, "Built-in policy: oracle, noisy")->check(CLI::IsMember({"oracle", "noisy"}));
        app.add_option("--policy-file", policy_file, "Tabular policy JSON from bc-fit (overrides --policy)");
        app.add_option("--epsilon", epsilon, "Swap probability for the noisy oracle")->check(CLI::Range(0.0, 1.0));
        app.add_option("--noise-seed", noise_seed, "Noise seed for the noisy oracle");
    }

    std::shared_ptr<const ActionScorer> scorer(const Env& env) const {
        if (!policy_file.empty()) return TabularScorer::from_json(read_json(policy_file), env.config().bins);
        if (policy == "noisy") return noisy_oracle_scorer(env, epsilon, noise_seed);
        return oracle_scorer(env);
    }

    static nlohmann::json read_json(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        return nlohmann::json::parse(in);
    }
};

struct SearchOptions {
    MctsConfig mcts;
    std::string value_file;
    std::size_t value_seeds = 100;

    void add(CLI::App& app) {
        app.add_option("--rounds", mcts.rounds, "Search rounds K per action")->check(CLI::PositiveNumber);
        app.add_option("--c", mcts.c, "Exploration scalar")->check(CLI::NonNegativeNumber);
        app.add_option("--lambda", mcts.lambda, "Leaf mix: value estimate weight")->check(CLI::Range(0.0, 1.0));
        app.add_option("--k", mcts.k, "Beam width")->check(CLI::PositiveNumber);
        app.add_option("--rollout-max", mcts.rollout_max, "Rollout step cap");
        app.add_option("--value-file", value_file, "Value table JSON from value-fit");
        app.add_option("--value-seeds", value_seeds,
                       "Without --value-file: oracle demos per task (seeds from 50000) to fit the value table");
    }

    std::shared_ptr<const ValueFn> value(const Env& env, const std::vector<std::string>& tasks) const {
        if (!value_file.empty()) return TabularValueFn::from_json(PolicyOptions::read_json(value_file));
        return tabular_value_fit(record_oracle_demos(env, tasks, value_seeds, 50000));
    }
};

std::vector<std::string> split_csv(const std::string& s, char delim = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, delim);) {
        if (item.find_first_not_of(' ') != std::string::npos) out.push_back(item);
    }
    return out;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << '\n';
}

SessionServer* g_server = nullptr;

void on_signal(int) {
    // stop() joins threads, so hand it off rather than calling it here.
    if (g_server) std::thread([] { g_server->stop(); }).detach();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic GUI-interaction environment and agent toolkit"};
    app.require_subcommand(1);
    Env env;
    std::string tasks_csv;
    std::size_t seeds = 100;
    std::uint64_t seed_base = 0;

    // tasks
    auto* tasks_cmd = app.add_subcommand("tasks", "List built-in tasks as JSON");

    // record
    auto* record_cmd = app.add_subcommand("record", "Record scripted-oracle demos as JSONL");
    std::string out_path;
    bool with_frames = false;
    record_cmd->add_option("--tasks", tasks_csv, "Comma-separated task ids (default: all)");
    record_cmd->add_option("--seeds", seeds, "Seeds per task");
    record_cmd->add_option("--seed-base", seed_base, "First seed");
    record_cmd->add_option("--out", out_path, "Output JSONL")->required();
    record_cmd->add_flag("--with-frames", with_frames, "Embed a base64 PNG of every pre-action frame");

    // replay
    auto* replay_cmd = app.add_subcommand("replay", "Validate demos by replaying them");
    std::string demos_path;
    replay_cmd->add_option("demos", demos_path, "Demo JSONL")->required();

    // bc-fit / value-fit
    auto* bc_cmd = app.add_subcommand("bc-fit", "Fit a tabular policy on demos");
    bc_cmd->add_option("demos", demos_path, "Demo JSONL")->required();
    bc_cmd->add_option("--out", out_path, "Output policy JSON")->required();
    double min_raw = 0.8;
    bc_cmd->add_option("--min-raw", min_raw, "Drop demos with a lower raw reward");
    auto* value_cmd = app.add_subcommand("value-fit", "Fit a tabular value function on demos");
    value_cmd->add_option("demos", demos_path, "Demo JSONL")->required();
    value_cmd->add_option("--out", out_path, "Output value JSON")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Mean score per task and over the suite");
    PolicyOptions policy;
    SearchOptions search;
    bool use_search = false;
    bool as_json = false;
    bool as_table = false;
    policy.add(*eval_cmd);
    search.add(*eval_cmd);
    eval_cmd->add_flag("--search", use_search, "Act with tree search instead of greedily");
    eval_cmd->add_option("--tasks", tasks_csv, "Comma-separated task ids (default: all)");
    eval_cmd->add_option("--seeds", seeds, "Seeds per task");
    eval_cmd->add_option("--seed-base", seed_base, "First seed");
    auto* json_flag = eval_cmd->add_flag("--json", as_json, "JSON report");
    eval_cmd->add_flag("--table", as_table, "Text table (default)")->excludes(json_flag);

    // search-improve
    auto* harvest_cmd = app.add_subcommand("search-improve", "Harvest search-policy episodes as demos");
    std::string task_id;
    policy.add(*harvest_cmd);
    search.add(*harvest_cmd);
    harvest_cmd->add_option("--task", task_id, "Task id")->required();
    harvest_cmd->add_option("--seeds", seeds, "Seeds");
    harvest_cmd->add_option("--seed-base", seed_base, "First seed");
    harvest_cmd->add_option("--out", out_path, "Output JSONL")->required();
    bool keep_all = false;
    harvest_cmd->add_flag("--keep-failures", keep_all, "Also write episodes with raw < 0.8");

    // improve
    auto* improve_cmd = app.add_subcommand("improve", "Run the harvest / filter / refit loop");
    std::size_t iterations = 2;
    policy.add(*improve_cmd);
    search.add(*improve_cmd);
    improve_cmd->add_option("--tasks", tasks_csv, "Comma-separated task ids")->required();
    improve_cmd->add_option("--seeds", seeds, "Seeds per task");
    improve_cmd->add_option("--seed-base", seed_base, "First seed");
    improve_cmd->add_option("--iterations", iterations, "Iterations")->check(CLI::PositiveNumber);
    improve_cmd->add_option("--out", out_path, "Write the final policy table here");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "WebSocket session service");
    std::uint16_t port = 8765;
    std::string address = "127.0.0.1";
    std::string demo_dir = "demos";
    serve_cmd->add_option("--port", port, "Port (0 picks a free one)");
    serve_cmd->add_option("--address", address, "Listen address");
    serve_cmd->add_option("--demo-dir", demo_dir, "Where saved demos go");

    // render
    auto* render_cmd = app.add_subcommand("render", "Write the observation PNG after a list of actions");
    std::string actions_text;
    render_cmd->add_option("--task", task_id, "Task id")->required();
    render_cmd->add_option("--seed", seed_base, "Seed");
    render_cmd->add_option("--actions", actions_text, "Semicolon-separated actions to apply first");
    render_cmd->add_option("--out", out_path, "Output PNG")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const std::vector<std::string> tasks = tasks_csv.empty() ? env.tasks().ids() : split_csv(tasks_csv);

        if (*tasks_cmd) {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& id : env.tasks().ids()) {
                j.push_back({{"id", id}, {"horizon", env.tasks().get(id).horizon_hint()},
                             {"binary", is_binary_task(id)}});
            }
            std::cout << j.dump(2) << '\n';
        } else if (*record_cmd) {
            auto demos = record_oracle_demos(env, tasks, seeds, seed_base);
            if (with_frames) {
                for (auto& d : demos) attach_frames(env, d);
            }
            write_jsonl(out_path, demos);
            std::cerr << "wrote " << demos.size() << " demos to " << out_path << '\n';
        } else if (*replay_cmd) {
            const auto demos = read_jsonl(demos_path);
            std::size_t bad = 0;
            for (std::size_t i = 0; i < demos.size(); ++i) {
                const auto r = replay_validate(env, demos[i]);
                if (!r.valid) {
                    ++bad;
                    std::cout << "demo " << i << " (" << demos[i].task_id << " seed " << demos[i].seed
                              << "): mismatch at step " << *r.first_mismatch << ": " << r.reason << '\n';
                }
            }
            std::cout << demos.size() - bad << "/" << demos.size() << " demos valid\n";
            return bad == 0 ? 0 : 1;
        } else if (*bc_cmd) {
            const auto demos = filter_low_reward(read_jsonl(demos_path), min_raw);
            const auto scorer = tabular_bc_fit(bc_dataset(demos), env.config().bins);
            write_json_file(out_path, scorer->to_json());
            std::cerr << "fit on " << demos.size() << " demos, " << scorer->size() << " states\n";
        } else if (*value_cmd) {
            write_json_file(out_path, tabular_value_fit(read_jsonl(demos_path))->to_json());
        } else if (*eval_cmd) {
            const auto scorer = policy.scorer(env);
            AgentFactory agent = greedy_factory(scorer, search.mcts.k);
            if (use_search) {
                agent = search_factory(std::make_shared<TreeSearch>(env, scorer, search.value(env, tasks), search.mcts));
            }
            EvalOptions opts;
            opts.n_seeds = seeds;
            opts.seed_base = seed_base;
            const auto report = eval_suite(env, agent, tasks, opts);
            if (as_json) std::cout << to_json(report).dump(2) << '\n';
            else std::cout << format_table(report);
        } else if (*harvest_cmd) {
            const auto scorer = policy.scorer(env);
            auto ts = std::make_shared<TreeSearch>(env, scorer, search.value(env, {task_id}), search.mcts);
            HarvestOptions opts;
            opts.tasks = {task_id};
            opts.n_seeds = seeds;
            opts.seed_base = seed_base;
            const auto h = harvest(env, ts, opts);
            const auto out = keep_all ? h.episodes : filter_successes(h.episodes);
            write_jsonl(out_path, out);
            std::cerr << "search mean " << h.search_mean_score << "; wrote " << out.size() << "/"
                      << h.episodes.size() << " episodes to " << out_path << '\n';
        } else if (*improve_cmd) {
            ImproveOptions opts;
            opts.harvest.tasks = tasks;
            opts.harvest.n_seeds = seeds;
            opts.harvest.seed_base = seed_base;
            opts.mcts = search.mcts;
            opts.iterations = iterations;
            const auto result = improve(env, policy.scorer(env), search.value(env, tasks), opts);
            for (const auto& it : result.reports) std::cout << to_json(it).dump() << '\n';
            if (!out_path.empty()) {
                const auto* table = dynamic_cast<const TabularScorer*>(result.final_scorer.get());
                if (!table) throw std::runtime_error("no successful episodes; nothing to write");
                write_json_file(out_path, table->to_json());
            }
        } else if (*serve_cmd) {
            SessionManager manager(env, demo_dir);
            SessionServer server(manager);
            const auto bound = server.start(port, address);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on ws://" << address << ":" << bound << '\n';
            server.wait();
            g_server = nullptr;
        } else if (*render_cmd) {
            auto [state, obs] = env.reset(task_id, seed_base);
            for (const auto& text : split_csv(actions_text, ';')) {
                if (state.done) throw TerminalStateError("episode ended before: " + text);
                auto [next, r] = env.step(state, parse_action(text, env.config().bins));
                state = std::move(next);
                obs = std::move(r.observation);
            }
            const auto png = encode_png(obs.frame);
            std::ofstream out(out_path, std::ios::binary);
            out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
            if (!out) throw std::runtime_error("cannot write " + out_path);
            std::cout << digest_hex(obs.digest) << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
