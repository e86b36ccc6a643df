#ifndef IDE_PWLINEAR_HPP
#define IDE_PWLINEAR_HPP

#include <optional>
#include <vector>

#include "ide/rational.hpp"

namespace ide {

/// Continuous piecewise-linear map from time to rational. Built by appending
/// segments to the right; evaluation past the last breakpoint extends the
/// final slope. Adjacent segments with equal slope are merged.
class PWLinear {
public:
    struct Segment {
        Rational to;
        Rational slope;
        Rational value_at_to;
        bool operator==(const Segment&) const = default;
    };

    PWLinear(Rational start, Rational value_at_start);

    const Rational& domain_start() const { return start_; }
    /// Last explicit breakpoint (domain_start when no segments yet).
    const Rational& last_breakpoint() const;
    Rational final_slope() const;

    Rational value_at(const Rational& t) const;

    void append_segment(const Rational& to, const Rational& slope);

    /// Smallest t >= from with value == level, scanning up to the last
    /// breakpoint; none when the level is not attained there.
    std::optional<Rational> first_root_at_level(const Rational& level, const Rational& from) const;

    /// domain_start plus every segment end.
    std::vector<Rational> breakpoints() const;

    const std::vector<Segment>& segments() const { return segs_; }
    bool operator==(const PWLinear&) const = default;

private:
    Rational start_;
    Rational value0_;
    std::vector<Segment> segs_;
};

}  // namespace ide

#endif
