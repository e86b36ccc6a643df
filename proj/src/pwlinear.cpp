#include "ide/pwlinear.hpp"

#include "ide/errors.hpp"

namespace ide {

PWLinear::PWLinear(Rational start, Rational value_at_start)
    : start_(std::move(start)), value0_(std::move(value_at_start)) {}

const Rational& PWLinear::last_breakpoint() const {
    return segs_.empty() ? start_ : segs_.back().to;
}

Rational PWLinear::final_slope() const {
    return segs_.empty() ? Rational(0) : segs_.back().slope;
}

Rational PWLinear::value_at(const Rational& t) const {
    if (t < start_) throw InputError("PWLinear: evaluation before domain start");
    if (segs_.empty()) return value0_;
    if (t > segs_.back().to)
        return segs_.back().value_at_to + segs_.back().slope * (t - segs_.back().to);
    // first segment whose end is >= t
    std::size_t lo = 0, hi = segs_.size() - 1;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (segs_[mid].to < t)
            lo = mid + 1;
        else
            hi = mid;
    }
    return segs_[lo].value_at_to - segs_[lo].slope * (segs_[lo].to - t);
}

void PWLinear::append_segment(const Rational& to, const Rational& slope) {
    const Rational& from = last_breakpoint();
    if (to <= from) throw InternalError("PWLinear: segment must extend the domain");
    Rational base = segs_.empty() ? value0_ : segs_.back().value_at_to;
    Rational end_value = base + slope * (to - from);
    if (!segs_.empty() && segs_.back().slope == slope) {
        segs_.back().to = to;
        segs_.back().value_at_to = std::move(end_value);
    } else {
        segs_.push_back({to, slope, std::move(end_value)});
    }
}

std::optional<Rational> PWLinear::first_root_at_level(const Rational& level, const Rational& from) const {
    if (from < start_) throw InputError("PWLinear: root scan before domain start");
    Rational lo = from;
    Rational v_lo = value_at(from);
    if (v_lo == level) return lo;
    for (const auto& seg : segs_) {
        if (seg.to <= lo) continue;
        const Rational& hi = seg.to;
        const Rational& v_hi = seg.value_at_to;
        if (v_lo == level) return lo;
        // strictly monotone crossing inside [lo, hi]
        if ((v_lo < level && v_hi >= level) || (v_lo > level && v_hi <= level)) {
            return lo + (level - v_lo) / seg.slope;
        }
        lo = hi;
        v_lo = v_hi;
    }
    return std::nullopt;
}

std::vector<Rational> PWLinear::breakpoints() const {
    std::vector<Rational> out{start_};
    out.reserve(segs_.size() + 1);
    for (const auto& s : segs_) out.push_back(s.to);
    return out;
}

}  // namespace ide
