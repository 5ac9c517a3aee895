#include "concord/common.hpp"

#include <atomic>
#include <limits>

namespace concord {

namespace {
std::atomic<int> g_max_dimension{12};
}

int max_dimension() { return g_max_dimension.load(std::memory_order_relaxed); }

void set_max_dimension(int n) {
    if (n < 2) n = 2;
    if (n > kDimensionLimit) n = kDimensionLimit;
    g_max_dimension.store(n, std::memory_order_relaxed);
}

void require(bool condition, const std::string& message) {
    if (!condition) throw ContractViolation(message);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag + 0x51'7c'c1'b7'27'22'0a'95ULL));
}

std::uint64_t binomial(int n, int k) {
    require(n >= 0 && k >= 0, "binomial: negative argument");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        // multiply first, overflow-checked, then divide (always exact)
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        if (result > std::numeric_limits<std::uint64_t>::max() / num)
            throw ContractViolation("binomial: overflow");
        result = result * num / static_cast<std::uint64_t>(i);
    }
    return result;
}

} // namespace concord
