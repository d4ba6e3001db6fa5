#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rqt {

// Boolean query/key mask; true = attention allowed.
struct AttentionMask {
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> allowed;  // row-major

    AttentionMask() = default;
    AttentionMask(int r, int c, bool init = false)
        : rows(r), cols(c), allowed(static_cast<size_t>(r) * c, init ? 1 : 0) {
        if (r < 0 || c < 0) throw std::invalid_argument("AttentionMask: negative shape");
    }

    bool at(int q, int k) const { return allowed[static_cast<size_t>(q) * cols + k] != 0; }
    void set(int q, int k, bool value) {
        allowed[static_cast<size_t>(q) * cols + k] = value ? 1 : 0;
    }
};

}  // namespace rqt
