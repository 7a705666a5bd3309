#pragma once

#include <ssg/action.hpp>
#include <ssg/word.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>

namespace ssg {

using Complex = std::complex<double>;

/**
 * Finite formal combination sum c_i w_i of words, an element of C_c(G).
 * Words are keyed syntactically (freely reduced); zero coefficients are dropped.
 */
class LinComb {
public:
    LinComb() = default;
    LinComb(const Word& w, Complex c = 1.0) { add(w, c); }

    void add(const Word& w, Complex c) {
        auto [it, fresh] = terms_.try_emplace(w, c);
        if (!fresh) it->second += c;
        if (it->second == Complex(0.0)) terms_.erase(it);
    }

    const std::map<Word, Complex>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    LinComb adjoint() const {
        LinComb out;
        for (const auto& [w, c] : terms_) out.add(w.inverse(), std::conj(c));
        return out;
    }

    LinComb& operator+=(const LinComb& other) {
        for (const auto& [w, c] : other.terms_) add(w, c);
        return *this;
    }

    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }

    friend LinComb operator*(Complex s, const LinComb& x) {
        LinComb out;
        for (const auto& [w, c] : x.terms_) out.add(w, s * c);
        return out;
    }

    /// Convolution product: w1 * w2 when composable, zero otherwise.
    friend LinComb operator*(const LinComb& x, const LinComb& y) {
        LinComb out;
        for (const auto& [w1, c1] : x.terms_) {
            for (const auto& [w2, c2] : y.terms_) {
                if (w1.domain() == w2.target()) out.add(w1 * w2, c1 * c2);
            }
        }
        return out;
    }

    bool operator==(const LinComb&) const = default;

private:
    std::map<Word, Complex> terms_;
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline std::string format_complex(Complex c) {
    if (c.imag() == 0.0) return format_double(c.real());
    if (c.real() == 0.0) return format_double(c.imag()) + "i";
    return "(" + format_double(c.real()) + (c.imag() < 0 ? "-" : "+") + format_double(std::abs(c.imag())) + "i)";
}

/// Renders x in the same syntax parse_lincomb accepts, e.g. "0.5*a + -1*b^-1".
inline std::string format_lincomb(const SelfSimilarAction& action, const LinComb& x) {
    if (x.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : x.terms()) {
        if (!out.empty()) out += " + ";
        out += format_complex(c) + "*" + action.format(w);
    }
    return out;
}

}  // namespace ssg
