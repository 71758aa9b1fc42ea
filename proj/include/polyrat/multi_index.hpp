#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyrat {

/// Exponent vector of a monomial z^a = z_1^{a_1} ... z_d^{a_d}.
using MultiIndex = std::vector<int>;

inline int grade(const MultiIndex& a)
{
    return std::accumulate(a.begin(), a.end(), 0);
}

inline bool entrywise_leq(const MultiIndex& a, const MultiIndex& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] > b[j])
            return false;
    return true;
}

inline MultiIndex add(const MultiIndex& a, const MultiIndex& b)
{
    MultiIndex r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        r[j] = a[j] + b[j];
    return r;
}

/// a - b, or empty vector when any component would go negative.
inline MultiIndex sub_or_empty(const MultiIndex& a, const MultiIndex& b)
{
    MultiIndex r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        r[j] = a[j] - b[j];
        if (r[j] < 0)
            return {};
    }
    return r;
}

/// Ordering used everywhere for box enumerations: ascending total degree,
/// ties broken so that the lexicographically larger exponent comes first
/// (1, x, y, x^2, xy, y^2, ...).
inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b)
{
    const int ga = grade(a), gb = grade(b);
    if (ga != gb)
        return ga < gb;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

inline std::string to_string(const MultiIndex& a)
{
    std::string s = "(";
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (j)
            s += ',';
        s += std::to_string(a[j]);
    }
    return s + ")";
}

/// The index set { b : b <= n entrywise } with a fixed graded-lex enumeration.
/// Every matrix and coefficient vector in the library is laid out in this
/// order, so the enumeration must be stable across runs.
class MultiIndexBox {
public:
    MultiIndexBox() = default;

    explicit MultiIndexBox(MultiIndex bound) : bound_(std::move(bound))
    {
        if (bound_.empty())
            throw std::invalid_argument("MultiIndexBox: dimension must be >= 1");
        long long card = 1;
        for (int nj : bound_) {
            if (nj < 0)
                throw std::invalid_argument("MultiIndexBox: negative bound component");
            card *= nj + 1;
        }
        const int d = dim();
        strides_.assign(d, 1);
        for (int j = 1; j < d; ++j)
            strides_[j] = strides_[j - 1] * (bound_[j - 1] + 1);

        order_.reserve(static_cast<std::size_t>(card));
        MultiIndex cur(d, 0);
        for (long long k = 0; k < card; ++k) {
            order_.push_back(cur);
            for (int j = 0; j < d; ++j) {
                if (++cur[j] <= bound_[j])
                    break;
                cur[j] = 0;
            }
        }
        std::sort(order_.begin(), order_.end(), graded_lex_less);

        rank_.assign(static_cast<std::size_t>(card), -1);
        for (int k = 0; k < static_cast<int>(order_.size()); ++k)
            rank_[static_cast<std::size_t>(linear(order_[k]))] = k;
    }

    int dim() const { return static_cast<int>(bound_.size()); }
    const MultiIndex& bound() const { return bound_; }
    int size() const { return static_cast<int>(order_.size()); }

    const MultiIndex& at(int k) const { return order_[static_cast<std::size_t>(k)]; }

    bool contains(const MultiIndex& a) const
    {
        if (static_cast<int>(a.size()) != dim())
            return false;
        for (int j = 0; j < dim(); ++j)
            if (a[j] < 0 || a[j] > bound_[j])
                return false;
        return true;
    }

    /// Position in the enumeration, or -1 when a is outside the box.
    int index_of(const MultiIndex& a) const
    {
        if (!contains(a))
            return -1;
        return rank_[static_cast<std::size_t>(linear(a))];
    }

    friend bool operator==(const MultiIndexBox& x, const MultiIndexBox& y)
    {
        return x.bound_ == y.bound_;
    }
    friend bool operator!=(const MultiIndexBox& x, const MultiIndexBox& y)
    {
        return !(x == y);
    }

private:
    long long linear(const MultiIndex& a) const
    {
        long long v = 0;
        for (int j = 0; j < dim(); ++j)
            v += static_cast<long long>(a[j]) * strides_[j];
        return v;
    }

    MultiIndex bound_;
    std::vector<MultiIndex> order_;
    std::vector<long long> strides_;
    std::vector<int> rank_;
};

inline MultiIndexBox enumerate_box(const MultiIndex& n)
{
    return MultiIndexBox(n);
}

} // namespace polyrat
