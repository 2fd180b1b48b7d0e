#pragma once

#include <filesystem>
#include <string_view>

#include "pkrylov/trace.hpp"

namespace pkrylov {

/// Latency and bandwidth figures of a device attached over PCI-Express.
/// All values must be strictly positive.
struct DeviceProfile {
    double launch_latency = 8e-6;     // seconds
    double transfer_latency = 8e-6;   // seconds
    double bandwidth = 200e9;         // device memory, bytes/second
    double transfer_bandwidth = 8e9;  // host link, bytes/second

    /// Throws PreconditionError when any field is not strictly positive.
    void validate() const;

    friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

/// Parses `key = value` lines (keys are the field names above, `#` starts a
/// comment). Missing keys keep their defaults; unknown keys are a ParseError.
DeviceProfile parse_profile(std::string_view text);
DeviceProfile load_profile(const std::filesystem::path& path);

/// Data volume the device streams from memory within one launch latency.
struct LatencyBarrier {
    double bytes;
    double doubles;
};

LatencyBarrier latency_barrier(const DeviceProfile& profile) noexcept;

/// Additive model of one solver iteration:
///   launches * launch_latency + transfers * transfer_latency
///   + bytes_kernel / bandwidth + bytes_transfer / transfer_bandwidth.
/// No overlap between launches is assumed, so the estimate is pessimistic
/// whenever the device can hide launch latency behind a running kernel.
double predict_iteration_time(const TraceCounts& iteration, const DeviceProfile& profile) noexcept;

}  // namespace pkrylov
