#include "pkrylov/cost_model.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "pkrylov/errors.hpp"

namespace pkrylov {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void DeviceProfile::validate() const {
    if (!(launch_latency > 0) || !(transfer_latency > 0) || !(bandwidth > 0) ||
        !(transfer_bandwidth > 0)) {
        throw PreconditionError("device profile: all latencies and bandwidths must be > 0");
    }
}

DeviceProfile parse_profile(std::string_view text) {
    DeviceProfile profile;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("profile: expected key = value", line_no);
        const auto key = trim(line.substr(0, eq));
        const auto raw = trim(line.substr(eq + 1));

        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
            throw ParseError("profile: bad number '" + std::string(raw) + "'", line_no);
        }

        if (key == "launch_latency") {
            profile.launch_latency = value;
        } else if (key == "transfer_latency") {
            profile.transfer_latency = value;
        } else if (key == "bandwidth") {
            profile.bandwidth = value;
        } else if (key == "transfer_bandwidth") {
            profile.transfer_bandwidth = value;
        } else {
            throw ParseError("profile: unknown key '" + std::string(key) + "'", line_no);
        }
    }
    profile.validate();
    return profile;
}

DeviceProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile(buf.str());
}

LatencyBarrier latency_barrier(const DeviceProfile& profile) noexcept {
    const double bytes = profile.launch_latency * profile.bandwidth;
    return {bytes, bytes / 8.0};
}

double predict_iteration_time(const TraceCounts& it, const DeviceProfile& profile) noexcept {
    return static_cast<double>(it.launches) * profile.launch_latency +
           static_cast<double>(it.transfers) * profile.transfer_latency +
           static_cast<double>(it.bytes_kernel) / profile.bandwidth +
           static_cast<double>(it.bytes_transfer) / profile.transfer_bandwidth;
}

}  // namespace pkrylov
