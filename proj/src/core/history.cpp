#include "wavephase/core/history.hpp"

#include <cmath>
#include <stdexcept>

#include "wavephase/core/error.hpp"

namespace wavephase {

HistoryField::HistoryField(GridSpec grid, double h) : grid_(grid), h_(h) {
    if (!(h >= 0.0)) throw std::invalid_argument("HistoryField: h must be >= 0");
    steps_ = grid_.delay_steps(h);
    if (h > 0.0 && std::abs(static_cast<double>(steps_) * grid_.dt - h) > 1e-9 * h)
        throw std::invalid_argument("HistoryField: dt must divide h");
    ring_.resize(capacity());
    times_.resize(capacity());
}

std::size_t HistoryField::slot(std::size_t age) const { return (head_ + age) % capacity(); }

void HistoryField::push(double t, std::vector<double> frame) {
    if (frame.size() != grid_.node_count())
        throw std::invalid_argument("HistoryField: frame size does not match the grid");
    if (count_ > 0 && std::abs(t - (t_now() + grid_.dt)) > 1e-9 * grid_.dt * std::max(1.0, std::abs(t)))
        throw std::invalid_argument("HistoryField: snapshot times must advance by exactly dt");
    if (count_ < capacity()) {
        const std::size_t s = slot(count_);
        ring_[s] = std::move(frame);
        times_[s] = t;
        ++count_;
    } else {
        ring_[head_] = std::move(frame);
        times_[head_] = t;
        head_ = (head_ + 1) % capacity();
    }
}

double HistoryField::t_now() const {
    if (count_ == 0) throw std::logic_error("HistoryField: empty");
    return times_[slot(count_ - 1)];
}

double HistoryField::t_oldest() const {
    if (count_ == 0) throw std::logic_error("HistoryField: empty");
    return times_[head_];
}

std::span<const double> HistoryField::frame_at(double t) const {
    if (count_ == 0) throw std::logic_error("HistoryField: empty");
    const double k = (t - t_oldest()) / grid_.dt;
    const long idx = std::lround(k);
    if (idx < 0 || idx >= static_cast<long>(count_) || std::abs(k - static_cast<double>(idx)) > 1e-6)
        throw RangeError("HistoryField: time " + std::to_string(t) + " is not a stored knot");
    return ring_[slot(static_cast<std::size_t>(idx))];
}

std::span<const double> HistoryField::delayed_frame() const {
    if (!complete()) throw std::logic_error("HistoryField: window incomplete");
    return ring_[head_];
}

std::span<const double> HistoryField::current_frame() const {
    if (count_ == 0) throw std::logic_error("HistoryField: empty");
    return ring_[slot(count_ - 1)];
}

double HistoryField::eval(double t, double x) const {
    const auto frame = frame_at(t);
    const double pos = (x - grid_.x_min) / grid_.dx;
    if (pos < -1e-12 || pos > static_cast<double>(frame.size() - 1) + 1e-12)
        throw RangeError("HistoryField: x outside the grid");
    return lagrange4(frame, pos);
}

std::vector<std::pair<double, std::vector<double>>> HistoryField::snapshots() const {
    std::vector<std::pair<double, std::vector<double>>> out;
    out.reserve(count_);
    for (std::size_t a = 0; a < count_; ++a) out.emplace_back(times_[slot(a)], ring_[slot(a)]);
    return out;
}

}  // namespace wavephase
