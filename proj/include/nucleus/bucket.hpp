#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "nucleus/common.hpp"

namespace nucleus {

// Array-of-buckets keyed by non-negative integers with lazy deletion.
// Supports extracting the minimum non-empty bucket at or above the frontier
// and batched key updates that never fall below the frontier.
class BucketStructure {
 public:
  BucketStructure() = default;

  explicit BucketStructure(std::span<const std::int64_t> keys) {
    std::int64_t kmax = 0;
    for (auto k : keys) kmax = std::max(kmax, k);
    key_of_.assign(keys.begin(), keys.end());
    peeled_.assign(keys.size(), 0);
    buckets_.assign(kmax + 1, {});
    for (cid i = 0; i < static_cast<cid>(keys.size()); ++i)
      buckets_[keys[i]].push_back(i);
    cur_ = 0;
    remaining_ = static_cast<cid>(keys.size());
  }

  bool empty() const { return remaining_ == 0; }
  std::int64_t frontier() const { return cur_; }
  std::int64_t key_of(cid id) const { return key_of_[id]; }
  bool peeled(cid id) const { return peeled_[id] != 0; }

  // Removes and returns all ids in the minimum non-empty bucket, sorted by
  // id. Their keys freeze at the returned bucket key.
  std::int64_t extract_min(std::vector<cid>& out) {
    out.clear();
    if (remaining_ == 0) return -1;
    while (out.empty()) {
      if (cur_ >= static_cast<std::int64_t>(buckets_.size()))
        throw protocol_error("bucket frontier escaped key range");
      auto& b = buckets_[cur_];
      if (b.empty()) {
        ++cur_;
        continue;
      }
      for (cid id : b)
        if (!peeled_[id] && key_of_[id] == cur_) out.push_back(id);
      b.clear();
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (cid id : out) peeled_[id] = 1;
    remaining_ -= static_cast<cid>(out.size());
    return cur_;
  }

  // Applies aggregated decrements and rebuckets: the new key is the updated
  // count clamped up to the current frontier so keys never fall below it.
  void decrement_and_rebucket(std::span<const std::pair<cid, std::int64_t>> batch,
                              std::vector<std::int64_t>& counts) {
    for (const auto& [id, delta] : batch) {
      if (peeled_[id]) continue;
      counts[id] = std::max<std::int64_t>(0, counts[id] - delta);
      std::int64_t key = std::max(counts[id], cur_);
      if (key != key_of_[id]) {
        key_of_[id] = key;
        buckets_[key].push_back(id);
      }
    }
  }

  std::int64_t bytes() const {
    std::int64_t b = static_cast<std::int64_t>(key_of_.size() * sizeof(std::int64_t) +
                                               peeled_.size());
    for (const auto& v : buckets_)
      b += static_cast<std::int64_t>(v.capacity() * sizeof(cid));
    return b;
  }

 private:
  std::vector<std::int64_t> key_of_;
  std::vector<char> peeled_;
  std::vector<std::vector<cid>> buckets_;
  std::int64_t cur_ = 0;
  cid remaining_ = 0;
};

}  // namespace nucleus
