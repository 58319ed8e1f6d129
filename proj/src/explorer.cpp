#include "vfield/explorer.hpp"

#include <cassert>
#include <cstring>
#include <fstream>

#include "vfield/errors.hpp"
#include "vfield/walk.hpp"

namespace vfield {

std::array<std::uint16_t, kFieldCount> encode_all(
    const GrayImage& image, Position pos, const std::array<Codebook, kFieldCount>& codebooks) {
    const auto fields = split_fields(extract_patch(image, pos));
    std::array<std::uint16_t, kFieldCount> states{};
    for (int f = 0; f < kFieldCount; ++f)
        states[static_cast<std::size_t>(f)] = static_cast<std::uint16_t>(
            encode(std::span<const std::uint8_t>(fields[static_cast<std::size_t>(f)].values),
                   codebooks[static_cast<std::size_t>(f)]));
    return states;
}

RunLog explore(SceneStream& stream, const std::array<Codebook, kFieldCount>& codebooks,
               const ExplorationConfig& config, const EventSink& sink) {
    if (config.total_saccades <= 0)
        throw std::invalid_argument("total_saccades must be positive");
    for (int f = 1; f <= kFieldCount; ++f) {
        const Codebook& cb = codebooks[static_cast<std::size_t>(f - 1)];
        if (cb.field != f || cb.dim != field_dim(f) || cb.k <= 0)
            throw std::invalid_argument("codebook for field " + std::to_string(f) +
                                        " missing or mismatched");
    }
    const long long per_scene = stream.schedule().saccades_per_scene;
    const long long scenes_needed = (config.total_saccades + per_scene - 1) / per_scene;
    if (scenes_needed > stream.count())
        throw InsufficientScenes("run needs " + std::to_string(scenes_needed) +
                                 " scenes, schedule holds " + std::to_string(stream.count()));

    RunLog log;
    std::mt19937_64 rng(config.walk_seed);
    int scene_index = 0;
    const GrayImage* img = &stream.scene(0);
    Position pos = center_position(img->width, img->height);
    auto pre = encode_all(*img, pos, codebooks);
    log.scenes_used = 1;

    for (long long step = 0; step < config.total_saccades; ++step) {
        ++log.steps;
        const bool boundary =
            ((step + 1) % per_scene == 0) && (step + 1 < config.total_saccades);
        if (boundary) {
            ++scene_index;
            img = &stream.scene(scene_index);
            pos = center_position(img->width, img->height);
            pre = encode_all(*img, pos, codebooks);
            ++log.suppressed;
            ++log.scenes_used;
            continue;
        }
        bool interior = false;
        const int q = random_step(rng, pos, img->width, img->height, &interior);
        assert(fov_in_bounds(pos, img->width, img->height));
        ++log.draw_histogram[static_cast<std::size_t>(q - 1)];
        if (interior) {
            ++log.interior_steps;
            ++log.interior_histogram[static_cast<std::size_t>(q - 1)];
        }
        TransitionEvent event;
        event.pre = pre;
        event.saccade = static_cast<std::uint8_t>(q);
        event.post = encode_all(*img, pos, codebooks);
        if (sink) sink(event);
        ++log.events;
        pre = event.post;
    }
    return log;
}

// --- event log ---------------------------------------------------------------

namespace {
constexpr char kEventLogMagic[8] = {'V', 'F', 'E', 'V', 'L', 'O', 'G', '1'};
constexpr std::size_t kRecordSize = 9 * 2 + 1 + 9 * 2;

void put_u16(std::uint8_t* p, std::uint16_t v) {
    p[0] = static_cast<std::uint8_t>(v & 0xFF);
    p[1] = static_cast<std::uint8_t>(v >> 8);
}
std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
}  // namespace

struct EventLogWriter::Impl {
    std::ofstream out;
    std::filesystem::path path;
};

EventLogWriter::EventLogWriter(const std::filesystem::path& path, const std::string& header_json)
    : impl_(new Impl{std::ofstream(path, std::ios::binary), path}) {
    if (!impl_->out) {
        delete impl_;
        throw IoError(path.string() + ": cannot open for writing");
    }
    impl_->out.write(kEventLogMagic, sizeof(kEventLogMagic));
    const auto len = static_cast<std::uint32_t>(header_json.size());
    std::uint8_t lenb[4] = {static_cast<std::uint8_t>(len & 0xFF),
                            static_cast<std::uint8_t>((len >> 8) & 0xFF),
                            static_cast<std::uint8_t>((len >> 16) & 0xFF),
                            static_cast<std::uint8_t>(len >> 24)};
    impl_->out.write(reinterpret_cast<const char*>(lenb), 4);
    impl_->out.write(header_json.data(), static_cast<std::streamsize>(header_json.size()));
}

EventLogWriter::~EventLogWriter() {
    close();
    delete impl_;
}

void EventLogWriter::write(const TransitionEvent& event) {
    std::uint8_t rec[kRecordSize];
    for (int f = 0; f < kFieldCount; ++f) put_u16(rec + 2 * f, event.pre[static_cast<std::size_t>(f)]);
    rec[18] = event.saccade;
    for (int f = 0; f < kFieldCount; ++f)
        put_u16(rec + 19 + 2 * f, event.post[static_cast<std::size_t>(f)]);
    impl_->out.write(reinterpret_cast<const char*>(rec), kRecordSize);
}

void EventLogWriter::close() {
    if (impl_->out.is_open()) {
        impl_->out.flush();
        if (!impl_->out) throw IoError(impl_->path.string() + ": write failed");
        impl_->out.close();
    }
}

EventLogContents read_event_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open");
    char magic[8];
    in.read(magic, 8);
    if (in.gcount() != 8 || std::memcmp(magic, kEventLogMagic, 8) != 0)
        throw IoError(path.string() + ": not an event log");
    std::uint8_t lenb[4];
    in.read(reinterpret_cast<char*>(lenb), 4);
    if (in.gcount() != 4) throw IoError(path.string() + ": truncated header");
    const std::uint32_t len = lenb[0] | (lenb[1] << 8) | (lenb[2] << 16) |
                              (static_cast<std::uint32_t>(lenb[3]) << 24);
    EventLogContents contents;
    contents.header_json.resize(len);
    in.read(contents.header_json.data(), static_cast<std::streamsize>(len));
    if (static_cast<std::uint32_t>(in.gcount()) != len)
        throw IoError(path.string() + ": truncated header json");

    std::uint8_t rec[kRecordSize];
    for (;;) {
        in.read(reinterpret_cast<char*>(rec), kRecordSize);
        if (in.gcount() == 0) break;
        if (static_cast<std::size_t>(in.gcount()) != kRecordSize)
            throw IoError(path.string() + ": truncated record");
        TransitionEvent event;
        for (int f = 0; f < kFieldCount; ++f) event.pre[static_cast<std::size_t>(f)] = get_u16(rec + 2 * f);
        event.saccade = rec[18];
        for (int f = 0; f < kFieldCount; ++f)
            event.post[static_cast<std::size_t>(f)] = get_u16(rec + 19 + 2 * f);
        contents.events.push_back(event);
    }
    return contents;
}

}  // namespace vfield
