#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "breachsim/payment/card.hpp"

namespace breachsim::attack {

/// Bytes shared by adjacent chunks: one maximal framed track, so no frame can
/// fall between two chunks.
inline constexpr std::size_t kChunkOverlap = payment::kMaxFramedTrack;

struct TrackHit {
  std::size_t offset = 0;  ///< position of the start sentinel
  std::string pan;
  std::string track2;

  bool operator==(const TrackHit&) const = default;
};

/// Framed track-2 matches: ';' PAN(13-19 digits, Luhn) '=' 7+ digits '?',
/// at most 39 bytes end to end. Hits are in offset order.
std::vector<TrackHit> scan_tracks(std::span<const std::uint8_t> buf);

/// Same search in windows of `chunk` bytes, each extended by kChunkOverlap
/// into the next; duplicates from the overlap are dropped by offset.
std::vector<TrackHit> scan_tracks_chunked(std::span<const std::uint8_t> buf, std::size_t chunk);

std::size_t chunk_count(std::size_t size, std::size_t chunk);

}  // namespace breachsim::attack
