#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rfcount {

/// One received packet's RSSI reading.
struct PacketSample {
    std::string receiver_id;
    std::uint64_t seq = 0;
    std::uint64_t timestamp_ms = 0;
    int rssi_dbm = 0;

    bool operator==(const PacketSample&) const = default;
};

/// All samples recorded by one receiver, ordered by sequence number.
struct ReceiverStream {
    std::string receiver_id;
    std::vector<PacketSample> samples;

    bool operator==(const ReceiverStream&) const = default;
};

/// An RSSI trace: per-receiver packet streams plus the nominal inter-packet
/// interval.  Construction canonicalizes (receivers sorted by id, samples by
/// seq) and validates:
///   - at least one receiver, every receiver non-empty
///   - per receiver: seq strictly increasing, timestamps non-decreasing
///   - rssi_dbm within [-127, 0]
/// Violations throw IntegrityError / EmptyInputError.  Instances are
/// immutable afterwards.
class Trace {
public:
    Trace(std::vector<ReceiverStream> receivers, int inter_packet_interval_ms = 150);

    const std::vector<ReceiverStream>& receivers() const { return receivers_; }
    int inter_packet_interval_ms() const { return inter_packet_interval_ms_; }

    /// nullptr when absent.
    const ReceiverStream* find(std::string_view receiver_id) const;
    /// Throws ConfigError when absent.
    const ReceiverStream& at(std::string_view receiver_id) const;

    std::size_t total_samples() const;

    bool operator==(const Trace&) const = default;

private:
    std::vector<ReceiverStream> receivers_;
    int inter_packet_interval_ms_;
};

/// Parse trace CSV text.  Format: optional `# key=value` comment lines, an
/// optional `receiver_id,seq,timestamp_ms,rssi_dbm` header, then one sample
/// per row.  Malformed rows throw ParseError carrying the 1-based line
/// number; duplicate seq throws IntegrityError; no data rows at all throws
/// EmptyInputError.
Trace parse_trace(std::string_view text);

/// Inverse of parse_trace: emits `# interval_ms=`, the header, then rows
/// grouped by receiver.  Byte-stable for a given trace.
std::string serialize_trace(const Trace& trace);

Trace read_trace(const std::filesystem::path& path);
void write_trace(const Trace& trace, const std::filesystem::path& path);

/// Whole-file read/write helpers shared by the CSV front ends.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace rfcount
