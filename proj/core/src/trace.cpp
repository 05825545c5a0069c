#include "rfcount/trace.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "rfcount/errors.hpp"
#include "text_util.hpp"

namespace rfcount {

namespace {

constexpr std::string_view kHeader = "receiver_id,seq,timestamp_ms,rssi_dbm";
constexpr int kRssiMin = -127;
constexpr int kRssiMax = 0;

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw ParseError(what, line);
}

}  // namespace

Trace::Trace(std::vector<ReceiverStream> receivers, int inter_packet_interval_ms)
    : receivers_(std::move(receivers)), inter_packet_interval_ms_(inter_packet_interval_ms) {
    if (inter_packet_interval_ms_ <= 0)
        throw IntegrityError("inter_packet_interval_ms must be positive");
    if (receivers_.empty()) throw EmptyInputError("trace has no receivers");

    std::sort(receivers_.begin(), receivers_.end(),
              [](const ReceiverStream& a, const ReceiverStream& b) {
                  return a.receiver_id < b.receiver_id;
              });
    for (std::size_t i = 1; i < receivers_.size(); ++i) {
        if (receivers_[i].receiver_id == receivers_[i - 1].receiver_id)
            throw IntegrityError("duplicate receiver id: " + receivers_[i].receiver_id);
    }

    for (auto& stream : receivers_) {
        if (stream.receiver_id.empty()) throw IntegrityError("empty receiver id");
        if (stream.samples.empty())
            throw EmptyInputError("receiver " + stream.receiver_id + " has no samples");
        std::stable_sort(stream.samples.begin(), stream.samples.end(),
                         [](const PacketSample& a, const PacketSample& b) { return a.seq < b.seq; });
        for (std::size_t i = 0; i < stream.samples.size(); ++i) {
            const PacketSample& s = stream.samples[i];
            if (s.receiver_id != stream.receiver_id)
                throw IntegrityError("sample receiver id " + s.receiver_id +
                                     " does not match stream " + stream.receiver_id);
            if (s.rssi_dbm < kRssiMin || s.rssi_dbm > kRssiMax)
                throw IntegrityError("receiver " + stream.receiver_id + ": rssi_dbm " +
                                     text::format_int(s.rssi_dbm) + " outside [-127, 0]");
            if (i > 0) {
                const PacketSample& prev = stream.samples[i - 1];
                if (s.seq == prev.seq)
                    throw IntegrityError("receiver " + stream.receiver_id + ": duplicate seq " +
                                         text::format_uint(s.seq));
                if (s.timestamp_ms < prev.timestamp_ms)
                    throw IntegrityError("receiver " + stream.receiver_id +
                                         ": timestamp decreases at seq " + text::format_uint(s.seq));
            }
        }
    }
}

const ReceiverStream* Trace::find(std::string_view receiver_id) const {
    for (const auto& stream : receivers_)
        if (stream.receiver_id == receiver_id) return &stream;
    return nullptr;
}

const ReceiverStream& Trace::at(std::string_view receiver_id) const {
    const ReceiverStream* s = find(receiver_id);
    if (!s) throw ConfigError("receiver not in trace: " + std::string(receiver_id));
    return *s;
}

std::size_t Trace::total_samples() const {
    std::size_t n = 0;
    for (const auto& stream : receivers_) n += stream.samples.size();
    return n;
}

Trace parse_trace(std::string_view text) {
    std::map<std::string, std::vector<PacketSample>, std::less<>> groups;
    int interval_ms = 150;
    bool saw_data = false;
    bool saw_header = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = (eol == std::string_view::npos) ? text.substr(pos)
                                                               : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view line = text::trim(text::strip_cr(raw));
        if (line.empty()) {
            if (eol == std::string_view::npos) break;
            continue;
        }

        if (line.front() == '#') {
            if (saw_data || saw_header)
                parse_fail(line_no, "comment line after data");
            std::string_view body = text::trim(line.substr(1));
            std::size_t eq = body.find('=');
            if (eq != std::string_view::npos &&
                text::trim(body.substr(0, eq)) == "interval_ms") {
                auto v = text::parse_number<int>(body.substr(eq + 1));
                if (!v || *v <= 0) parse_fail(line_no, "invalid interval_ms value");
                interval_ms = *v;
            }
            continue;
        }

        if (!saw_data && !saw_header && line == kHeader) {
            saw_header = true;
            continue;
        }

        auto fields = text::split(line, ',');
        if (fields.size() != 4)
            parse_fail(line_no, "expected 4 fields, got " + text::format_uint(fields.size()));

        PacketSample sample;
        sample.receiver_id = std::string(text::trim(fields[0]));
        if (sample.receiver_id.empty()) parse_fail(line_no, "empty receiver_id");

        auto seq = text::parse_number<std::uint64_t>(fields[1]);
        if (!seq) parse_fail(line_no, "invalid seq field '" + std::string(text::trim(fields[1])) + "'");
        sample.seq = *seq;

        auto ts = text::parse_number<std::uint64_t>(fields[2]);
        if (!ts)
            parse_fail(line_no,
                       "invalid timestamp_ms field '" + std::string(text::trim(fields[2])) + "'");
        sample.timestamp_ms = *ts;

        auto rssi = text::parse_number<int>(fields[3]);
        if (!rssi)
            parse_fail(line_no, "invalid rssi_dbm field '" + std::string(text::trim(fields[3])) + "'");
        sample.rssi_dbm = *rssi;  // range is a stream invariant, checked on construction

        groups[sample.receiver_id].push_back(std::move(sample));
        saw_data = true;
    }

    if (!saw_data) throw EmptyInputError("trace file contains no samples");

    std::vector<ReceiverStream> receivers;
    receivers.reserve(groups.size());
    for (auto& [id, samples] : groups) receivers.push_back({id, std::move(samples)});
    return Trace(std::move(receivers), interval_ms);
}

std::string serialize_trace(const Trace& trace) {
    std::string out;
    out.reserve(32 + trace.total_samples() * 20);
    out += "# interval_ms=";
    out += text::format_int(trace.inter_packet_interval_ms());
    out += '\n';
    out += kHeader;
    out += '\n';
    for (const auto& stream : trace.receivers()) {
        for (const auto& s : stream.samples) {
            out += s.receiver_id;
            out += ',';
            out += text::format_uint(s.seq);
            out += ',';
            out += text::format_uint(s.timestamp_ms);
            out += ',';
            out += text::format_int(s.rssi_dbm);
            out += '\n';
        }
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return std::move(buf).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

Trace read_trace(const std::filesystem::path& path) { return parse_trace(read_text_file(path)); }

void write_trace(const Trace& trace, const std::filesystem::path& path) {
    write_text_file(path, serialize_trace(trace));
}

}  // namespace rfcount
