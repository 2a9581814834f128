#include "ewens/parallel.hpp"

#include <atomic>

namespace ewens::parallel {

namespace {
std::atomic<unsigned> g_workers{0};
}

void set_workers(unsigned w) { g_workers.store(w); }

unsigned workers() {
    const unsigned w = g_workers.load();
    if (w != 0) return w;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace ewens::parallel
