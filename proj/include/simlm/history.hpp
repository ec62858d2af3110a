#pragma once

#include "simlm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace simlm {

/// One stored time level: t^{n-j}, u^{n-j} and the cached H(t^{n-j}, u^{n-j}, u^{n-j}).
struct HistorySlot {
    double t = 0.0;
    Vector u;
    Vector h;
};

/// Fixed-capacity ring of the last s time levels, indexed newest-first: slot(0) is t^n.
class History {
public:
    explicit History(std::size_t capacity) : slots_(capacity) {
        if (capacity == 0) throw std::invalid_argument("History: capacity must be >= 1");
    }

    [[nodiscard]] std::size_t capacity() const { return slots_.size(); }
    [[nodiscard]] std::size_t size() const { return filled_; }
    [[nodiscard]] bool full() const { return filled_ == slots_.size(); }

    [[nodiscard]] const HistorySlot& operator[](std::size_t j) const {
        return slots_[(head_ + j) % slots_.size()];
    }
    [[nodiscard]] const HistorySlot& newest() const { return (*this)[0]; }

    /// Insert a new newest slot, evicting the oldest when full.
    void push(HistorySlot slot) { recycle() = std::move(slot); }

    /// Make the oldest slot the newest and return it for overwriting in place; its buffers
    /// keep their allocation.
    HistorySlot& recycle() {
        head_ = (head_ + slots_.size() - 1) % slots_.size();
        if (filled_ < slots_.size()) ++filled_;
        return slots_[head_];
    }

    /// Largest deviation of consecutive time gaps from dt, relative to dt.
    [[nodiscard]] double spacing_error(double dt) const {
        double worst = 0.0;
        for (std::size_t j = 0; j + 1 < filled_; ++j) {
            const double gap = (*this)[j].t - (*this)[j + 1].t;
            worst = std::max(worst, std::abs(gap - dt) / dt);
        }
        return worst;
    }

private:
    std::vector<HistorySlot> slots_;
    std::size_t head_ = 0;
    std::size_t filled_ = 0;
};

}  // namespace simlm
