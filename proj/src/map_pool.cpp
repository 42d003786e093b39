#include "cb2/map_pool.hpp"

namespace cb2 {

MapPool::MapPool(GenConfig config, std::uint64_t base_seed)
    : config_(std::move(config)), base_seed_(base_seed) {}

MapPool::~MapPool() { stop_background(); }

std::uint64_t MapPool::reserve_index() { return next_index_++; }

GameMap MapPool::build(std::uint64_t index) const {
  GenConfig c = config_;
  c.seed = base_seed_ + index;
  return generate_map(c);
}

void MapPool::insert(std::uint64_t index, std::optional<GameMap> map) {
  {
    std::lock_guard lock(mu_);
    if (map) {
      ready_.emplace(index, std::move(*map));
    } else {
      failed_.insert(index);
    }
    --in_flight_;
  }
  changed_.notify_all();
}

std::optional<GameMap> MapPool::try_build(std::uint64_t index) const {
  try {
    return build(index);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

GameMap MapPool::acquire() {
  std::unique_lock lock(mu_);
  const std::uint64_t want = next_out_++;
  if (want == next_index_) {
    reserve_index();
    lock.unlock();
    changed_.notify_all();
    return build(want);
  }
  // Already reserved by a refill; wait for it rather than skipping ahead.
  changed_.wait(lock, [&] { return ready_.count(want) > 0 || failed_.count(want) > 0; });
  if (failed_.erase(want)) {
    lock.unlock();
    return build(want);
  }
  auto node = ready_.extract(want);
  lock.unlock();
  changed_.notify_all();
  return std::move(node.mapped());
}

void MapPool::refill(std::size_t target_size) {
  for (;;) {
    std::uint64_t index = 0;
    {
      std::lock_guard lock(mu_);
      if (ready_.size() + in_flight_ >= target_size) return;
      index = reserve_index();
      ++in_flight_;
    }
    auto map = try_build(index);
    const bool ok = map.has_value();
    insert(index, std::move(map));
    if (!ok) return;
  }
}

void MapPool::start_background(std::size_t target_size) {
  stop_background();
  {
    std::lock_guard lock(mu_);
    target_ = target_size;
  }
  worker_ = std::jthread([this](std::stop_token stop) {
    while (!stop.stop_requested()) {
      std::uint64_t index = 0;
      {
        std::unique_lock lock(mu_);
        changed_.wait(lock, stop, [&] { return ready_.size() + in_flight_ < target_; });
        if (stop.stop_requested()) return;
        index = reserve_index();
        ++in_flight_;
      }
      auto map = try_build(index);
      const bool ok = map.has_value();
      insert(index, std::move(map));
      if (!ok) return;
    }
  });
}

void MapPool::stop_background() {
  if (worker_.joinable()) {
    worker_.request_stop();
    worker_.join();
  }
}

std::size_t MapPool::size() const {
  std::lock_guard lock(mu_);
  return ready_.size();
}

}  // namespace cb2
