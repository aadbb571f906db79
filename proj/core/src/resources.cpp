#include "aiora/resources.hpp"

#include <algorithm>

namespace aiora {

std::string ResourceVector::to_string() const {
  return "(cpu=" + std::to_string(cpu) + ", mem=" + std::to_string(memory) +
         ", sto=" + std::to_string(storage) + ", bw=" + std::to_string(bandwidth) + ")";
}

ResourceVector min(const ResourceVector& a, const ResourceVector& b) {
  return {std::min(a.cpu, b.cpu), std::min(a.memory, b.memory),
          std::min(a.storage, b.storage), std::min(a.bandwidth, b.bandwidth)};
}

ResourceVector max(const ResourceVector& a, const ResourceVector& b) {
  return {std::max(a.cpu, b.cpu), std::max(a.memory, b.memory),
          std::max(a.storage, b.storage), std::max(a.bandwidth, b.bandwidth)};
}

}  // namespace aiora
