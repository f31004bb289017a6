#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qecbath {

// Geometry for the bit-flip sector of a toric code on an L x L torus.
// Anyon sites live on the torus vertices; qubits sit on the bonds.
// An H bond at (x, y) joins sites (x, y)-(x+1, y); a V bond at (x, y)
// joins (x, y)-(x, y+1), all coordinates mod L. A flipped bond toggles
// the anyon parity of both of its endpoint sites.

enum class Orientation : uint8_t { H = 0, V = 1 };

struct QubitId {
    Orientation orientation;
    int x, y;

    friend bool operator==(const QubitId&, const QubitId&) = default;
};

struct Site {
    int x = 0, y = 0;

    friend bool operator==(const Site&, const Site&) = default;
    // raster order (y major) so syndromes come out sorted by construction
    friend bool operator<(const Site& a, const Site& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

struct CodeParams {
    int L;

    explicit CodeParams(int L);  // requires L >= 2

    int n_qubits() const { return 2 * L * L; }
    int n_sites() const { return L * L; }

    int site_index(Site s) const { return s.y * L + s.x; }
    int qubit_index(QubitId q) const {
        return static_cast<int>(q.orientation) * L * L + q.y * L + q.x;
    }
    QubitId qubit_at(int index) const;

    int wrap(int a) const {
        a %= L;
        return a < 0 ? a + L : a;
    }
    Site wrap(Site s) const { return {wrap(s.x), wrap(s.y)}; }
};

// Bit vector over the 2L^2 qubits; XOR-composable, so an even number of
// flips on one qubit cancels.
class ErrorConfig {
public:
    ErrorConfig() = default;
    explicit ErrorConfig(const CodeParams& c);

    int n_bits() const { return n_bits_; }
    bool test(int qubit_index) const {
        return (words_[static_cast<size_t>(qubit_index) >> 6] >>
                (qubit_index & 63)) & 1u;
    }
    void flip(int qubit_index) {
        words_[static_cast<size_t>(qubit_index) >> 6] ^=
            uint64_t{1} << (qubit_index & 63);
    }
    ErrorConfig& operator^=(const ErrorConfig& other);

    int weight() const;  // number of flipped qubits
    bool empty() const;

    // indices of flipped qubits, ascending
    std::vector<int> flipped() const;

    std::string to_hex() const;
    static ErrorConfig from_hex(const std::string& hex, const CodeParams& c);

    friend bool operator==(const ErrorConfig&, const ErrorConfig&) = default;

private:
    int n_bits_ = 0;
    std::vector<uint64_t> words_;
};

ErrorConfig operator^(ErrorConfig a, const ErrorConfig& b);

// Sites with -1 stabilizer eigenvalue; sorted, always of even cardinality.
struct Syndrome {
    std::vector<Site> anyons;

    int size() const { return static_cast<int>(anyons.size()); }
    bool empty() const { return anyons.empty(); }

    friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

Syndrome syndrome_of(const ErrorConfig& e, const CodeParams& c);

// Minimal-image displacement from a to b: dx, dy in (-L/2, L/2], congruent
// to b - a mod L. Ties at |d| = L/2 resolve to +L/2.
struct Displacement {
    int dx = 0, dy = 0;

    friend bool operator==(const Displacement&, const Displacement&) = default;
};

Displacement torus_displacement(Site a, Site b, const CodeParams& c);

// Horizontal-first staircase realizing a given displacement from a;
// its syndrome is exactly the two endpoints (or empty when they coincide).
ErrorConfig path_with_displacement(Site a, Displacement d, const CodeParams& c);
ErrorConfig canonical_path(Site a, Site b, const CodeParams& c);

// Parities of non-contractible loop crossings for a cycle configuration
// (empty syndrome required): wx counts H bonds on the column x = 0,
// wy counts V bonds on the row y = 0.
struct WindingClass {
    int wx = 0, wy = 0;

    bool trivial() const { return wx == 0 && wy == 0; }
    friend bool operator==(const WindingClass&, const WindingClass&) = default;
};

WindingClass winding_class(const ErrorConfig& e, const CodeParams& c);

// The four bonds bounding the plaquette with lower-left corner p.
ErrorConfig plaquette_boundary(Site p, const CodeParams& c);

}  // namespace qecbath
