#include "appdo/parallel.hpp"

#include <atomic>

namespace appdo {
namespace {
std::atomic<unsigned> g_threads{1};
}

void set_threads(unsigned n) { g_threads = n == 0 ? 1 : n; }
unsigned threads() { return g_threads; }

}  // namespace appdo
