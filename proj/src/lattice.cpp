#include "qecbath/lattice.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace qecbath {

CodeParams::CodeParams(int L_) : L(L_) {
    if (L < 2) throw std::invalid_argument("CodeParams: L must be >= 2");
}

QubitId CodeParams::qubit_at(int index) const {
    if (index < 0 || index >= n_qubits())
        throw std::invalid_argument("qubit_at: index out of range");
    const int per = L * L;
    Orientation o = index < per ? Orientation::H : Orientation::V;
    int rest = index % per;
    return {o, rest % L, rest / L};
}

ErrorConfig::ErrorConfig(const CodeParams& c)
    : n_bits_(c.n_qubits()), words_((static_cast<size_t>(n_bits_) + 63) / 64, 0) {}

ErrorConfig& ErrorConfig::operator^=(const ErrorConfig& other) {
    if (n_bits_ != other.n_bits_)
        throw std::invalid_argument("ErrorConfig: size mismatch");
    for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

ErrorConfig operator^(ErrorConfig a, const ErrorConfig& b) {
    a ^= b;
    return a;
}

int ErrorConfig::weight() const {
    int w = 0;
    for (uint64_t word : words_) w += std::popcount(word);
    return w;
}

bool ErrorConfig::empty() const {
    for (uint64_t word : words_)
        if (word) return false;
    return true;
}

std::vector<int> ErrorConfig::flipped() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(weight()));
    for (size_t i = 0; i < words_.size(); ++i) {
        uint64_t word = words_[i];
        while (word) {
            int b = std::countr_zero(word);
            out.push_back(static_cast<int>(i * 64) + b);
            word &= word - 1;
        }
    }
    return out;
}

std::string ErrorConfig::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve((static_cast<size_t>(n_bits_) + 3) / 4);
    for (int base = 0; base < n_bits_; base += 4) {
        int nibble = 0;
        for (int j = 0; j < 4 && base + j < n_bits_; ++j)
            nibble |= test(base + j) << j;
        out.push_back(digits[nibble]);
    }
    return out;
}

ErrorConfig ErrorConfig::from_hex(const std::string& hex, const CodeParams& c) {
    ErrorConfig e(c);
    if (hex.size() != (static_cast<size_t>(e.n_bits_) + 3) / 4)
        throw std::invalid_argument("from_hex: length mismatch");
    for (size_t i = 0; i < hex.size(); ++i) {
        char ch = hex[i];
        int nibble;
        if (ch >= '0' && ch <= '9') nibble = ch - '0';
        else if (ch >= 'a' && ch <= 'f') nibble = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F') nibble = ch - 'A' + 10;
        else throw std::invalid_argument("from_hex: bad digit");
        for (int j = 0; j < 4; ++j)
            if ((nibble >> j) & 1) {
                int q = static_cast<int>(i) * 4 + j;
                if (q >= e.n_bits_)
                    throw std::invalid_argument("from_hex: bit out of range");
                e.flip(q);
            }
    }
    return e;
}

Syndrome syndrome_of(const ErrorConfig& e, const CodeParams& c) {
    if (e.n_bits() != c.n_qubits())
        throw std::invalid_argument("syndrome_of: config sized for a different L");
    const int L = c.L;
    std::vector<uint8_t> parity(static_cast<size_t>(c.n_sites()), 0);
    for (int q : e.flipped()) {
        QubitId id = c.qubit_at(q);
        int s0 = id.y * L + id.x;
        parity[static_cast<size_t>(s0)] ^= 1;
        int s1 = id.orientation == Orientation::H
                     ? id.y * L + (id.x + 1) % L
                     : ((id.y + 1) % L) * L + id.x;
        parity[static_cast<size_t>(s1)] ^= 1;
    }
    Syndrome s;
    for (int i = 0; i < c.n_sites(); ++i)
        if (parity[static_cast<size_t>(i)]) s.anyons.push_back({i % L, i / L});
    return s;
}

Displacement torus_displacement(Site a, Site b, const CodeParams& c) {
    auto reduce = [&](int d) {
        d = c.wrap(d);
        if (2 * d > c.L) d -= c.L;
        return d;
    };
    return {reduce(b.x - a.x), reduce(b.y - a.y)};
}

ErrorConfig path_with_displacement(Site a, Displacement d, const CodeParams& c) {
    ErrorConfig e(c);
    int x = a.x, y = a.y;
    int sx = d.dx >= 0 ? 1 : -1;
    for (int i = 0; i < (d.dx >= 0 ? d.dx : -d.dx); ++i) {
        // the H bond between x and x+sx has x-coordinate min(x, x+sx)
        int bx = sx > 0 ? x : x - 1;
        e.flip(c.qubit_index({Orientation::H, c.wrap(bx), c.wrap(y)}));
        x += sx;
    }
    int sy = d.dy >= 0 ? 1 : -1;
    for (int i = 0; i < (d.dy >= 0 ? d.dy : -d.dy); ++i) {
        int by = sy > 0 ? y : y - 1;
        e.flip(c.qubit_index({Orientation::V, c.wrap(x), c.wrap(by)}));
        y += sy;
    }
    return e;
}

ErrorConfig canonical_path(Site a, Site b, const CodeParams& c) {
    return path_with_displacement(a, torus_displacement(a, b, c), c);
}

WindingClass winding_class(const ErrorConfig& e, const CodeParams& c) {
    if (!syndrome_of(e, c).empty())
        throw std::invalid_argument("winding_class: configuration is not a cycle");
    WindingClass w;
    for (int y = 0; y < c.L; ++y)
        w.wx ^= e.test(c.qubit_index({Orientation::H, 0, y}));
    for (int x = 0; x < c.L; ++x)
        w.wy ^= e.test(c.qubit_index({Orientation::V, x, 0}));
    return w;
}

ErrorConfig plaquette_boundary(Site p, const CodeParams& c) {
    ErrorConfig e(c);
    p = c.wrap(p);
    e.flip(c.qubit_index({Orientation::H, p.x, p.y}));
    e.flip(c.qubit_index({Orientation::H, p.x, c.wrap(p.y + 1)}));
    e.flip(c.qubit_index({Orientation::V, p.x, p.y}));
    e.flip(c.qubit_index({Orientation::V, c.wrap(p.x + 1), p.y}));
    return e;
}

}  // namespace qecbath
