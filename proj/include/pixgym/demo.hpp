#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pixgym/observation.hpp"

namespace pixgym {

enum class DemoSource { human, oracle, search };

std::string_view demo_source_name(DemoSource s);
DemoSource parse_demo_source(std::string_view s);

struct DemoStep {
    std::string action;  // action-grammar text
    Digest digest = 0;   // observation the action was taken on
    std::optional<std::vector<std::uint8_t>> frame_png;

    friend bool operator==(const DemoStep&, const DemoStep&) = default;
};

/// A recorded trajectory. Replaying `steps[i].action` from (task_id, seed)
/// reproduces every digest and the terminal raw reward.
struct DemoEpisode {
    std::string task_id;
    std::uint64_t seed = 0;
    std::vector<DemoStep> steps;
    double raw = 0.0;
    DemoSource source = DemoSource::oracle;

    friend bool operator==(const DemoEpisode&, const DemoEpisode&) = default;
};

}  // namespace pixgym
