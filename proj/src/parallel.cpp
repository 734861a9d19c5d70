#include "invrod/parallel.hpp"

#include <algorithm>

namespace invrod {

int assembly_threads() {
    static const int cached = [] {
        const char *env = std::getenv("INVROD_THREADS");
        if (!env)
            return 1;
        const int v = std::atoi(env);
        const int hw = std::max(1u, std::thread::hardware_concurrency());
        return std::clamp(v, 1, hw);
    }();
    return cached;
}

} // namespace invrod
