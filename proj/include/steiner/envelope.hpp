#ifndef STEINER_ENVELOPE_HPP
#define STEINER_ENVELOPE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace steiner {

struct Interval
{
    double lo;
    double hi;
};

/// A partial function of one parameter: value(t) on the union of domain
/// intervals, and an upper bound on |d value / dt| over [lo, hi] (infinity
/// when unknown).
template <class F>
concept EnvelopeFunction = requires(const F& f, double t) {
    { f.value(t) } -> std::convertible_to<double>;
    { f.lipschitz(t, t) } -> std::convertible_to<double>;
    { f.domain } -> std::convertible_to<std::vector<Interval>>;
};

struct CrossingResult
{
    std::vector<double> roots;
    // f - g vanished at every sample: the functions coincide here.
    bool identical = false;
    // Near-zero minima of |f - g| without a sign change.
    std::size_t tangential = 0;
};

inline constexpr std::size_t crossing_samples = 64;
inline constexpr double crossing_width = 1e-12;
// Window ends can be where the arc passes through q or r. Within this many
// radians of them the angle is dominated by rounding noise, so no roots are
// reported there.
inline constexpr double crossing_end_guard = 1e-7;
inline constexpr double identical_eps = 1e-14;
// |f - g| at or below this is an exact meeting point.
inline constexpr double zero_eps = 1e-12;

namespace detail {

template <class F, class G>
struct CrossingSearch
{
    const F& f;
    const G& g;
    CrossingResult out;
    std::vector<double> near_misses;
    std::vector<double> zeros;
    std::size_t budget = 1u << 14;

    double h(double t) const { return f.value(t) - g.value(t); }

    double bisect(double a, double b, double ha) const
    {
        for (;;) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b)
                break;
            const double hm = h(m);
            if (hm == 0)
                return m;
            if ((hm > 0) == (ha > 0)) {
                a = m;
                ha = hm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    }

    // Near misses closer than this to each other, to a root or to the window
    // ends belong to the same meeting point.
    static constexpr double cluster_gap = 1e-6;

    std::size_t count_tangential(double lo, double hi) const
    {
        std::vector<double> anchors = out.roots;
        anchors.push_back(lo);
        anchors.push_back(hi);
        std::sort(anchors.begin(), anchors.end());
        std::size_t n = 0;
        for (std::size_t i = 0; i < near_misses.size();) {
            std::size_t j = i;
            while (j + 1 < near_misses.size() && near_misses[j + 1] - near_misses[j] < cluster_gap)
                ++j;
            const double a = near_misses[i] - cluster_gap, b = near_misses[j] + cluster_gap;
            auto it = std::lower_bound(anchors.begin(), anchors.end(), a);
            if (it == anchors.end() || *it > b)
                ++n;
            i = j + 1;
        }
        return n;
    }

    // An exact zero is a root only if h changes sign across it.
    void classify_zeros(double lo, double hi)
    {
        constexpr double probe = 1e-7;
        for (double z : zeros) {
            if (z <= lo + crossing_width || z >= hi - crossing_width) {
                out.roots.push_back(z);
                continue;
            }
            const double hl = h(std::max(lo, z - probe)), hr = h(std::min(hi, z + probe));
            if ((hl > 0 && hr < 0) || (hl < 0 && hr > 0))
                out.roots.push_back(z);
            else
                near_misses.push_back(z);
        }
        std::sort(out.roots.begin(), out.roots.end());
        std::sort(near_misses.begin(), near_misses.end());
        out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                                    [](double a, double b) { return b - a < 1e3 * crossing_width; }),
                        out.roots.end());
    }

    void isolate(double a, double b, double ha, double hb)
    {
        if ((ha > 0 && hb < 0) || (ha < 0 && hb > 0)) {
            out.roots.push_back(bisect(a, b, ha));
            return;
        }
        if (std::abs(hb) <= zero_eps) {
            if (zeros.empty() || zeros.back() < b - crossing_width)
                zeros.push_back(b);
            return;
        }
        const double lip = f.lipschitz(a, b) + g.lipschitz(a, b);
        if (std::abs(ha) + std::abs(hb) > lip * (b - a))
            return;
        if (b - a <= 1e3 * crossing_width || budget == 0) {
            if (std::abs(ha) > zero_eps && std::min(std::abs(ha), std::abs(hb)) < 1e-9)
                near_misses.push_back(0.5 * (a + b));
            return;
        }
        --budget;
        const double m = 0.5 * (a + b);
        const double hm = h(m);
        isolate(a, m, ha, hm);
        isolate(m, b, hm, hb);
    }
};

} // namespace detail

namespace detail {

// Parameters inside (lo, hi) where f is discontinuous, if f reports any.
template <class F>
std::vector<double> breaks_of(const F& f, double lo, double hi)
{
    if constexpr (requires { f.breaks(lo, hi); })
        return f.breaks(lo, hi);
    else
        return {};
}

template <class F, class G>
CrossingResult crossings_in_window(const F& f, const G& g, double lo, double hi)
{
    CrossingSearch<F, G> s{f, g, {}, {}, {}};
    // The ends themselves may be singular; roots there are dropped anyway.
    if (hi - lo > 4 * crossing_end_guard) {
        lo += crossing_end_guard;
        hi -= crossing_end_guard;
    }
    if (!(hi > lo))
        return s.out;
    std::vector<double> ts(crossing_samples + 1), hs(crossing_samples + 1);
    bool all_zero = true;
    for (std::size_t i = 0; i <= crossing_samples; ++i) {
        ts[i] = lo + (hi - lo) * static_cast<double>(i) / crossing_samples;
        hs[i] = s.h(ts[i]);
        // Rounding in the angle grows with the local slope.
        const double tol = identical_eps * (1 + f.lipschitz(ts[i], ts[i]) + g.lipschitz(ts[i], ts[i]));
        all_zero = all_zero && std::abs(hs[i]) <= tol;
    }
    if (all_zero) {
        s.out.identical = true;
        return s.out;
    }
    if (std::abs(hs[0]) <= zero_eps)
        s.zeros.push_back(lo);
    for (std::size_t i = 0; i < crossing_samples; ++i)
        s.isolate(ts[i], ts[i + 1], hs[i], hs[i + 1]);
    s.classify_zeros(lo, hi);
    s.out.tangential = s.count_tangential(lo, hi);
    // Roots at the ends of the window are domain boundaries, not crossings.
    std::erase_if(s.out.roots, [&](double t) { return t <= lo + crossing_width || t >= hi - crossing_width; });
    return s.out;
}

} // namespace detail

/// Parameters in [lo, hi] where f = g, each isolated to crossing_width.
/// Sign changes are found from crossing_samples samples and refined by
/// subdivision wherever a Lipschitz bound cannot exclude a root. The window
/// is split where either function reports a discontinuity.
template <class F, class G>
CrossingResult crossings(const F& f, const G& g, double lo, double hi)
{
    if (!(hi > lo))
        return {};
    std::vector<double> cuts = detail::breaks_of(f, lo, hi);
    for (double t : detail::breaks_of(g, lo, hi))
        cuts.push_back(t);
    std::erase_if(cuts, [&](double t) { return t <= lo + crossing_end_guard || t >= hi - crossing_end_guard; });
    if (cuts.empty())
        return detail::crossings_in_window(f, g, lo, hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), lo);
    cuts.push_back(hi);
    CrossingResult out;
    out.identical = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i]))
            continue;
        const CrossingResult part = detail::crossings_in_window(f, g, cuts[i], cuts[i + 1]);
        out.roots.insert(out.roots.end(), part.roots.begin(), part.roots.end());
        out.tangential += part.tangential;
        out.identical = out.identical && part.identical;
    }
    if (out.identical)
        out.roots.clear();
    return out;
}

struct EnvelopePiece
{
    double lo;
    double hi;
    std::size_t fn;
};

struct Envelope
{
    std::vector<EnvelopePiece> pieces;
    std::size_t tangential = 0;
    std::size_t identical = 0;
    // Most crossings found between two sub-envelope functions on one interval.
    std::size_t max_crossings = 0;

    const EnvelopePiece* at(double t) const
    {
        auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                                   [](double x, const EnvelopePiece& p) { return x < p.lo; });
        if (it == pieces.begin())
            return nullptr;
        --it;
        return t <= it->hi ? &*it : nullptr;
    }
};

namespace detail {

inline void append_piece(std::vector<EnvelopePiece>& out, EnvelopePiece p)
{
    if (!(p.hi > p.lo))
        return;
    if (!out.empty() && out.back().fn == p.fn && out.back().hi >= p.lo) {
        out.back().hi = std::max(out.back().hi, p.hi);
        return;
    }
    out.push_back(p);
}

template <class F>
Envelope merge_envelopes(const std::vector<F>& fns, const Envelope& a, const Envelope& b)
{
    Envelope out;
    out.tangential = a.tangential + b.tangential;
    out.identical = a.identical + b.identical;
    out.max_crossings = std::max(a.max_crossings, b.max_crossings);
    std::vector<double> cuts;
    for (const auto& p : a.pieces) {
        cuts.push_back(p.lo);
        cuts.push_back(p.hi);
    }
    for (const auto& p : b.pieces) {
        cuts.push_back(p.lo);
        cuts.push_back(p.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double s = cuts[i], t = cuts[i + 1];
        const double mid = 0.5 * (s + t);
        while (ia < a.pieces.size() && a.pieces[ia].hi <= mid)
            ++ia;
        while (ib < b.pieces.size() && b.pieces[ib].hi <= mid)
            ++ib;
        const bool ha = ia < a.pieces.size() && a.pieces[ia].lo <= mid;
        const bool hb = ib < b.pieces.size() && b.pieces[ib].lo <= mid;
        if (!ha && !hb)
            continue;
        if (ha != hb) {
            append_piece(out.pieces, {s, t, ha ? a.pieces[ia].fn : b.pieces[ib].fn});
            continue;
        }
        const std::size_t fa = a.pieces[ia].fn, fb = b.pieces[ib].fn;
        const CrossingResult cr = crossings(fns[fa], fns[fb], s, t);
        out.tangential += cr.tangential;
        out.max_crossings = std::max(out.max_crossings, cr.roots.size());
        if (cr.identical) {
            ++out.identical;
            append_piece(out.pieces, {s, t, std::min(fa, fb)});
            continue;
        }
        std::vector<double> sub{s};
        sub.insert(sub.end(), cr.roots.begin(), cr.roots.end());
        sub.push_back(t);
        for (std::size_t j = 0; j + 1 < sub.size(); ++j) {
            const double m = 0.5 * (sub[j] + sub[j + 1]);
            const double va = fns[fa].value(m), vb = fns[fb].value(m);
            const std::size_t lower = va < vb ? fa : (vb < va ? fb : std::min(fa, fb));
            append_piece(out.pieces, {sub[j], sub[j + 1], lower});
        }
    }
    return out;
}

template <class F>
Envelope envelope_range(const std::vector<F>& fns, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) {
        Envelope e;
        auto dom = fns[lo].domain;
        std::sort(dom.begin(), dom.end(), [](Interval x, Interval y) { return x.lo < y.lo; });
        for (Interval d : dom)
            append_piece(e.pieces, {d.lo, d.hi, lo});
        return e;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return merge_envelopes(fns, envelope_range(fns, lo, mid), envelope_range(fns, mid, hi));
}

} // namespace detail

/// Pointwise minimum of partial functions by divide and conquer. Each piece
/// names the active function; parameters where no function is defined are
/// left uncovered.
template <EnvelopeFunction F>
Envelope lower_envelope(const std::vector<F>& fns)
{
    if (fns.empty())
        return {};
    return detail::envelope_range(fns, 0, fns.size());
}

} // namespace steiner

#endif // STEINER_ENVELOPE_HPP
