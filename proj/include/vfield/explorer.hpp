#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>

#include "vfield/codebook.hpp"
#include "vfield/scene.hpp"

namespace vfield {

struct ExplorationConfig {
    long long total_saccades = 1'000'000;
    std::uint64_t walk_seed = 0;
    bool start_center = true;  // the only supported placement
};

// One executed saccade: the 9 pre-saccadic states, the motor command, the 9
// post-saccadic states. Array slot f-1 holds field f; states are 1-based.
struct TransitionEvent {
    std::array<std::uint16_t, kFieldCount> pre{};
    std::uint8_t saccade = 0;  // q, 1..8
    std::array<std::uint16_t, kFieldCount> post{};
    bool operator==(const TransitionEvent&) const = default;
};

struct RunLog {
    long long steps = 0;       // scheduled saccade slots consumed
    long long events = 0;      // emitted transitions
    long long suppressed = 0;  // slots coinciding with a scene change
    int scenes_used = 0;
    std::array<long long, kSaccadeCount> draw_histogram{};
    long long interior_steps = 0;  // steps where all 8 saccades were feasible
    std::array<long long, kSaccadeCount> interior_histogram{};
};

using EventSink = std::function<void(const TransitionEvent&)>;

// Random exploration over the scheduled scenes. The position starts at the
// scene center; each slot encodes all fields, draws a feasible saccade,
// moves, re-encodes, and emits the event. A slot that coincides with a scene
// change instead advances the schedule, re-centers, and emits nothing: the
// environment is only constant within one scene, so no transition may span
// two. Emitted events therefore number total_saccades - (scenes_used - 1).
RunLog explore(SceneStream& stream, const std::array<Codebook, kFieldCount>& codebooks,
               const ExplorationConfig& config, const EventSink& sink);

std::array<std::uint16_t, kFieldCount> encode_all(
    const GrayImage& image, Position pos, const std::array<Codebook, kFieldCount>& codebooks);

// Binary event log: fixed-width records after a JSON header.
class EventLogWriter {
  public:
    EventLogWriter(const std::filesystem::path& path, const std::string& header_json);
    ~EventLogWriter();
    EventLogWriter(const EventLogWriter&) = delete;
    EventLogWriter& operator=(const EventLogWriter&) = delete;

    void write(const TransitionEvent& event);
    void close();

  private:
    struct Impl;
    Impl* impl_;
};

struct EventLogContents {
    std::string header_json;
    std::vector<TransitionEvent> events;
};

EventLogContents read_event_log(const std::filesystem::path& path);

}  // namespace vfield
