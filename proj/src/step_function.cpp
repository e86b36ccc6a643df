#include "ide/step_function.hpp"

#include <algorithm>
#include <cassert>

#include "ide/errors.hpp"

namespace ide {

StepFunction::StepFunction(Rational start, Rational value) : start_(start) {
    pieces_.push_back({std::move(start), std::move(value)});
}

StepFunction::StepFunction(Rational start, Rational value, Rational end) : start_(start), end_(std::move(end)) {
    if (*end_ <= start_) throw InputError("StepFunction: empty domain");
    pieces_.push_back({std::move(start), std::move(value)});
}

StepFunction StepFunction::from_intervals(
    const Rational& start,
    const std::vector<std::tuple<Rational, Rational, Rational>>& from_to_value) {
    auto sorted = from_to_value;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    StepFunction f(start, Rational(0));
    f.pieces_.clear();
    Rational cursor = start;
    f.pieces_.push_back({start, Rational(0)});
    for (const auto& [from, to, value] : sorted) {
        if (from < start) throw InputError("StepFunction: interval before domain start");
        if (to < from) throw InputError("StepFunction: interval ends before it starts");
        if (from < cursor) throw InputError("StepFunction: overlapping intervals");
        if (to == from || value.is_zero()) continue;
        f.pieces_.push_back({from, value});
        f.pieces_.push_back({to, Rational(0)});
        cursor = to;
    }
    f.canonicalize();
    return f;
}

std::size_t StepFunction::piece_index(const Rational& t) const {
    // last piece whose start is <= t
    std::size_t lo = 0, hi = pieces_.size();
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (pieces_[mid].from <= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

Rational StepFunction::value_at(const Rational& t) const {
    if (t < start_ || (end_ && *end_ <= t)) throw InputError("StepFunction: evaluation outside domain");
    return pieces_[piece_index(t)].value;
}

Rational StepFunction::value_left_of(const Rational& t) const {
    if (t <= start_ || (end_ && *end_ < t)) throw InputError("StepFunction: left limit outside domain");
    // last piece starting strictly before t
    std::size_t i = piece_index(t);
    if (pieces_[i].from == t) --i;
    return pieces_[i].value;
}

Rational StepFunction::integrate(const Rational& a, const Rational& b) const {
    if (b < a) throw InputError("StepFunction: reversed integration bounds");
    if (a < start_ || (end_ && *end_ < b)) throw InputError("StepFunction: integration outside domain");
    if (a == b) return Rational(0);
    Rational total(0);
    std::size_t i = piece_index(a);
    Rational lo = a;
    while (lo < b) {
        Rational hi = (i + 1 < pieces_.size()) ? min(pieces_[i + 1].from, b) : b;
        total += pieces_[i].value * (hi - lo);
        lo = hi;
        ++i;
    }
    return total;
}

std::optional<Rational> StepFunction::next_breakpoint_after(const Rational& t) const {
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        if (pieces_[i].from > t) return pieces_[i].from;
    }
    return std::nullopt;
}

int StepFunction::jump_count() const {
    int n = pieces_.front().value.is_zero() ? 0 : 1;
    n += static_cast<int>(pieces_.size()) - 1;
    return n;
}

std::optional<Rational> StepFunction::support_end() const {
    if (!pieces_.back().value.is_zero()) {
        if (!end_) throw InternalError("StepFunction: unbounded support");
        return *end_;
    }
    for (std::size_t i = pieces_.size(); i-- > 1;) {
        if (!pieces_[i - 1].value.is_zero()) return pieces_[i].from;
    }
    return std::nullopt;
}

void StepFunction::append(const Rational& to, const Rational& value) {
    if (!end_) throw InternalError("StepFunction: append to unbounded function");
    if (to <= *end_) throw InternalError("StepFunction: append must extend the domain");
    if (pieces_.back().value != value) pieces_.push_back({*end_, value});
    end_ = to;
}

void StepFunction::add_on(const Rational& a, const Rational& b, const Rational& delta) {
    if (b <= a || delta.is_zero()) return;
    if (a < start_ || (end_ && *end_ < b)) throw InputError("StepFunction: add_on outside domain");
    std::vector<Piece> out;
    out.reserve(pieces_.size() + 2);
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        Rational from = pieces_[i].from;
        std::optional<Rational> to = (i + 1 < pieces_.size()) ? std::optional(pieces_[i + 1].from) : end_;
        // split the piece at a and b where they fall inside it
        std::vector<Rational> cuts{from};
        if (a > from && (!to || a < *to)) cuts.push_back(a);
        if (b > from && (!to || b < *to)) cuts.push_back(b);
        for (const Rational& c : cuts) {
            Rational v = pieces_[i].value;
            if (c >= a && c < b) v += delta;
            out.push_back({c, v});
        }
    }
    pieces_ = std::move(out);
    canonicalize();
}

void StepFunction::truncate_at(const Rational& t) {
    if (t <= start_) throw InputError("StepFunction: truncation would empty the domain");
    if (end_ && *end_ <= t) return;
    end_ = t;
    std::size_t keep = piece_index(t) + 1;
    pieces_.resize(keep);
}

void StepFunction::canonicalize() {
    assert(!pieces_.empty());
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    for (auto& p : pieces_) {
        // same front: the later entry supersedes the earlier one
        while (!out.empty() && out.back().from == p.from) out.pop_back();
        if (!out.empty() && out.back().value == p.value) continue;
        out.push_back(std::move(p));
    }
    pieces_ = std::move(out);
}

StepFunction StepFunction::combine(
    std::span<const std::pair<const StepFunction*, Rational>> terms,
    const Rational& start, const Rational& end) {
    if (end <= start) throw InputError("StepFunction: empty combination window");
    // collect breakpoints inside (start, end)
    std::vector<Rational> cuts{start};
    for (const auto& [f, coeff] : terms) {
        (void)coeff;
        for (const auto& p : f->pieces()) {
            if (p.from > start && p.from < end) cuts.push_back(p.from);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    StepFunction result(start, Rational(0), end);
    result.pieces_.clear();
    for (const Rational& t : cuts) {
        Rational v(0);
        for (const auto& [f, coeff] : terms) v += coeff * f->value_at(t);
        result.pieces_.push_back({t, std::move(v)});
    }
    result.canonicalize();
    return result;
}

std::optional<Rational> StepFunction::min_breakpoint_after(
    std::span<const StepFunction* const> fs, const Rational& from) {
    std::optional<Rational> best;
    for (const StepFunction* f : fs) {
        auto b = f->next_breakpoint_after(from);
        if (b && (!best || *b < *best)) best = b;
    }
    return best;
}

}  // namespace ide
