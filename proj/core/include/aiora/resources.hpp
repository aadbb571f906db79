#pragma once

#include <cstdint>
#include <string>

namespace aiora {

// Integer resource quantities so that broker bookkeeping is exact.
struct ResourceVector {
  std::int64_t cpu = 0;        // millicores
  std::int64_t memory = 0;     // MB
  std::int64_t storage = 0;    // GB
  std::int64_t bandwidth = 0;  // Mbps

  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

  ResourceVector& operator+=(const ResourceVector& o) {
    cpu += o.cpu;
    memory += o.memory;
    storage += o.storage;
    bandwidth += o.bandwidth;
    return *this;
  }
  ResourceVector& operator-=(const ResourceVector& o) {
    cpu -= o.cpu;
    memory -= o.memory;
    storage -= o.storage;
    bandwidth -= o.bandwidth;
    return *this;
  }
  friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
  friend ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }

  // Componentwise partial order; not a total order.
  bool fits_within(const ResourceVector& o) const {
    return cpu <= o.cpu && memory <= o.memory && storage <= o.storage &&
           bandwidth <= o.bandwidth;
  }
  bool non_negative() const {
    return cpu >= 0 && memory >= 0 && storage >= 0 && bandwidth >= 0;
  }
  bool is_zero() const { return *this == ResourceVector{}; }
  // At least one component positive and none negative.
  bool positive() const { return non_negative() && !is_zero(); }

  std::string to_string() const;
};

// Componentwise min/max.
ResourceVector min(const ResourceVector& a, const ResourceVector& b);
ResourceVector max(const ResourceVector& a, const ResourceVector& b);

}  // namespace aiora
