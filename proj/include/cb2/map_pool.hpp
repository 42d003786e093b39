#pragma once

#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "cb2/mapgen.hpp"

namespace cb2 {

/// Pre-generated maps. Map n of the pool uses seed `base_seed + n`; acquire
/// always hands out the lowest ready index so the sequence is reproducible.
class MapPool {
 public:
  MapPool(GenConfig config, std::uint64_t base_seed);
  ~MapPool();

  MapPool(const MapPool&) = delete;
  MapPool& operator=(const MapPool&) = delete;

  /// Hands out map n on the n-th call, generating it on the spot when nobody
  /// has started on it yet.
  GameMap acquire();

  /// Generates on the calling thread until `target_size` maps are ready.
  void refill(std::size_t target_size);

  /// Keeps the pool at `target_size` from a background thread.
  void start_background(std::size_t target_size);
  void stop_background();

  std::size_t size() const;

 private:
  std::uint64_t reserve_index();
  void insert(std::uint64_t index, std::optional<GameMap> map);
  GameMap build(std::uint64_t index) const;
  std::optional<GameMap> try_build(std::uint64_t index) const;

  GenConfig config_;
  std::uint64_t base_seed_;
  mutable std::mutex mu_;
  std::condition_variable_any changed_;
  std::map<std::uint64_t, GameMap> ready_;
  std::set<std::uint64_t> failed_;  // reserved indices whose background build threw
  std::size_t in_flight_ = 0;
  std::uint64_t next_index_ = 0;  // next index to reserve for building
  std::uint64_t next_out_ = 0;    // next index to hand out
  std::size_t target_ = 0;
  std::jthread worker_;
};

}  // namespace cb2
