#ifndef IDE_STEP_FUNCTION_HPP
#define IDE_STEP_FUNCTION_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ide/rational.hpp"

namespace ide {

/// Right-constant piecewise-constant map from time to rational, defined on
/// [domain_start, domain_end) or on [domain_start, inf). The value at a
/// breakpoint belongs to the interval on its right. Adjacent pieces with
/// equal values are merged, so representations are canonical and comparable
/// with operator==.
class StepFunction {
public:
    struct Piece {
        Rational from;
        Rational value;
        bool operator==(const Piece&) const = default;
    };

    /// Constant `value` on [start, inf).
    StepFunction(Rational start, Rational value);
    /// Constant `value` on [start, end).
    StepFunction(Rational start, Rational value, Rational end);

    /// Builds a function that is 0 outside the given [from, to) intervals.
    /// Intervals must be disjoint; empty or zero-rate intervals are dropped.
    static StepFunction from_intervals(
        const Rational& start,
        const std::vector<std::tuple<Rational, Rational, Rational>>& from_to_value);

    const Rational& domain_start() const { return start_; }
    const std::optional<Rational>& domain_end() const { return end_; }

    /// Right-constant evaluation; t must lie in the domain.
    Rational value_at(const Rational& t) const;

    /// Left limit at t (the value on the piece ending at t); t must lie
    /// strictly inside the domain's closure.
    Rational value_left_of(const Rational& t) const;

    /// Exact integral over [a, b] within the domain (b == domain_end allowed).
    Rational integrate(const Rational& a, const Rational& b) const;

    /// Earliest value-change strictly after t, or none. The domain end is
    /// not a value change.
    std::optional<Rational> next_breakpoint_after(const Rational& t) const;

    /// Number of value changes, counting a nonzero value at domain_start as
    /// one jump.
    int jump_count() const;

    /// End of the last piece with nonzero value; none when identically zero.
    /// For unbounded functions the tail value must be zero.
    std::optional<Rational> support_end() const;

    /// Extends a bounded function: value on [domain_end, to) becomes `value`.
    void append(const Rational& to, const Rational& value);

    /// Adds `delta` to the values on [a, b). Used by mutation tests.
    void add_on(const Rational& a, const Rational& b, const Rational& delta);

    /// Restricts the domain to [domain_start, t).
    void truncate_at(const Rational& t);

    const std::vector<Piece>& pieces() const { return pieces_; }

    bool operator==(const StepFunction&) const = default;

    /// Pointwise linear combination sum coeff_i * f_i on [start, end).
    static StepFunction combine(
        std::span<const std::pair<const StepFunction*, Rational>> terms,
        const Rational& start, const Rational& end);

    /// Earliest breakpoint strictly after `from` across all functions.
    static std::optional<Rational> min_breakpoint_after(
        std::span<const StepFunction* const> fs, const Rational& from);

private:
    std::size_t piece_index(const Rational& t) const;
    void canonicalize();

    Rational start_;
    std::optional<Rational> end_;
    std::vector<Piece> pieces_;  // pieces_[0].from == start_, strictly increasing
};

}  // namespace ide

#endif
