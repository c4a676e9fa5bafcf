#include "breachsim/attack/track_scanner.hpp"

#include <algorithm>
#include <stdexcept>

#include "breachsim/payment/luhn.hpp"

namespace breachsim::attack {

namespace {

bool digit(std::uint8_t c) { return c >= '0' && c <= '9'; }

// Scans frames whose start sentinel lies in [from, to); reads may run past `to`.
void scan_range(std::span<const std::uint8_t> buf, std::size_t from, std::size_t to, std::vector<TrackHit>& out) {
  const std::size_t n = buf.size();
  for (std::size_t i = from; i < to; ++i) {
    if (buf[i] != ';') continue;
    std::size_t j = i + 1;
    while (j < n && digit(buf[j]) && j - i <= 20) ++j;
    const std::size_t pan_len = j - i - 1;
    if (pan_len < 13 || pan_len > 19 || j >= n || buf[j] != '=') continue;
    std::size_t k = j + 1;
    while (k < n && digit(buf[k]) && k - i < payment::kMaxFramedTrack) ++k;
    if (k - j - 1 < 7 || k >= n || buf[k] != '?') continue;
    if (k - i + 1 > payment::kMaxFramedTrack) continue;
    std::string pan(buf.begin() + static_cast<std::ptrdiff_t>(i + 1), buf.begin() + static_cast<std::ptrdiff_t>(j));
    if (!payment::luhn_valid(pan)) continue;
    std::string track2(buf.begin() + static_cast<std::ptrdiff_t>(i + 1), buf.begin() + static_cast<std::ptrdiff_t>(k));
    out.push_back({i, std::move(pan), std::move(track2)});
    i = k;
  }
}

}  // namespace

std::vector<TrackHit> scan_tracks(std::span<const std::uint8_t> buf) {
  std::vector<TrackHit> out;
  scan_range(buf, 0, buf.size(), out);
  return out;
}

std::size_t chunk_count(std::size_t size, std::size_t chunk) {
  if (chunk == 0) throw std::invalid_argument("chunk size must be positive");
  return (size + chunk - 1) / chunk;
}

std::vector<TrackHit> scan_tracks_chunked(std::span<const std::uint8_t> buf, std::size_t chunk) {
  const std::size_t chunks = chunk_count(buf.size(), chunk);
  std::vector<TrackHit> out;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(buf.size(), begin + chunk + kChunkOverlap);
    std::vector<TrackHit> local;
    // the window is all this chunk can see
    scan_range(buf.subspan(begin, end - begin), 0, end - begin, local);
    for (auto& h : local) {
      h.offset += begin;
      if (out.empty() || h.offset > out.back().offset) out.push_back(std::move(h));
    }
  }
  return out;
}

}  // namespace breachsim::attack
