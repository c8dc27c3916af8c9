#pragma once

// Intervals of the parameter line and finite unions of them.  A Region is
// kept normalized: pieces sorted by lower endpoint, pairwise disjoint, empty
// pieces dropped.  Endpoint openness matters only where a measure carries
// boundary atoms (deficient discrete cases); see measure.hpp.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "confidence/errors.hpp"

namespace confidence {

// Parameter-space interval; endpoints may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double theta) const { return theta >= lo && theta <= hi; }
    bool operator==(const Interval& other) const { return lo == other.lo && hi == other.hi; }
};

struct RegionPiece {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = false;

    bool empty() const {
        if (lo > hi) return true;
        if (lo == hi) return lo_open || hi_open;
        return false;
    }
    bool contains(double theta) const {
        if (theta < lo || theta > hi) return false;
        if (theta == lo && lo_open) return false;
        if (theta == hi && hi_open) return false;
        return true;
    }
};

class Region {
public:
    Region() = default; // empty region

    static Region point(double theta) { return Region({{theta, theta, false, false}}); }

    static Region interval(double lo, double hi, bool lo_open = false, bool hi_open = false) {
        return Region({{lo, hi, lo_open, hi_open}});
    }

    static Region whole(const Interval& domain) {
        return Region({{domain.lo, domain.hi, std::isinf(domain.lo), std::isinf(domain.hi)}});
    }

    // Normalizing constructor: sorts, drops empties, merges overlapping or
    // touching-and-covered pieces.
    explicit Region(std::vector<RegionPiece> pieces) {
        for (RegionPiece& p : pieces) {
            if (std::isnan(p.lo) || std::isnan(p.hi))
                throw argument_error("Region: NaN endpoint");
            if (p.lo > p.hi) throw argument_error("Region: piece with lo > hi");
            if (std::isinf(p.lo)) p.lo_open = true;
            if (std::isinf(p.hi)) p.hi_open = true;
        }
        std::erase_if(pieces, [](const RegionPiece& p) { return p.empty(); });
        std::sort(pieces.begin(), pieces.end(),
                  [](const RegionPiece& a, const RegionPiece& b) {
                      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
                  });
        for (const RegionPiece& p : pieces) {
            if (!pieces_.empty()) {
                RegionPiece& prev = pieces_.back();
                const bool overlaps = p.lo < prev.hi;
                const bool touches = p.lo == prev.hi && !(p.lo_open && prev.hi_open);
                if (overlaps || touches) {
                    if (p.hi > prev.hi) {
                        prev.hi = p.hi;
                        prev.hi_open = p.hi_open;
                    } else if (p.hi == prev.hi) {
                        prev.hi_open = prev.hi_open && p.hi_open;
                    }
                    if (p.lo == prev.lo) prev.lo_open = prev.lo_open && p.lo_open;
                    continue;
                }
            }
            pieces_.push_back(p);
        }
    }

    const std::vector<RegionPiece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }

    bool contains(double theta) const {
        for (const RegionPiece& p : pieces_) {
            if (theta < p.lo) break;
            if (p.contains(theta)) return true;
        }
        return false;
    }

    bool contained_in(const Interval& domain) const {
        for (const RegionPiece& p : pieces_)
            if (p.lo < domain.lo || p.hi > domain.hi) return false;
        return true;
    }

    // True when the region is exactly the whole domain.
    bool covers(const Interval& domain) const {
        return pieces_.size() == 1 && pieces_[0].lo <= domain.lo && pieces_[0].hi >= domain.hi;
    }

    static bool pieces_intersect(const RegionPiece& p, const RegionPiece& q) {
        if (p.hi < q.lo || q.hi < p.lo) return false;
        if (p.hi == q.lo) return !p.hi_open && !q.lo_open;
        if (q.hi == p.lo) return !q.hi_open && !p.lo_open;
        return true;
    }

    bool intersects(const Region& other) const {
        for (const RegionPiece& p : pieces_)
            for (const RegionPiece& q : other.pieces_)
                if (pieces_intersect(p, q)) return true;
        return false;
    }

    static Region union_of(const Region& a, const Region& b) {
        std::vector<RegionPiece> all = a.pieces_;
        all.insert(all.end(), b.pieces_.begin(), b.pieces_.end());
        return Region(std::move(all));
    }

    // Complement within a domain whose finite endpoints belong to it.
    Region complement_within(const Interval& domain) const {
        if (!contained_in(domain))
            throw domain_error("Region::complement_within: region not inside domain");
        std::vector<RegionPiece> out;
        double cursor = domain.lo;
        bool cursor_open = std::isinf(domain.lo);
        for (const RegionPiece& p : pieces_) {
            out.push_back({cursor, p.lo, cursor_open, !p.lo_open});
            cursor = p.hi;
            cursor_open = !p.hi_open;
        }
        out.push_back({cursor, domain.hi, cursor_open, std::isinf(domain.hi)});
        return Region(std::move(out));
    }

private:
    std::vector<RegionPiece> pieces_;
};

} // namespace confidence
