#ifndef ULRICH3_SPARSE_HPP
#define ULRICH3_SPARSE_HPP

#include <cstdint>
#include <tuple>
#include <vector>

#include "ulrich3/common.hpp"

namespace exactalg {

// Sparse matrix over the rationals. Entries are kept row-major sorted,
// duplicate-free and zero-free, so equal matrices serialize identically.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    struct Entry {
        int row;
        int col;
        u3::Rat v;
    };
    std::vector<Entry> entries;

    SparseMatrix() = default;
    SparseMatrix(int r, int c) : rows(r), cols(c) {}

    void add(int r, int c, const u3::Rat& v); // accumulate, canonicalized lazily
    void canonicalize();                      // sort row-major, merge, drop zeros
    u3::Rat at(int r, int c) const;           // zero when absent
    SparseMatrix transpose() const;
    int64_t entry_count() const { return (int64_t)entries.size(); }

    static SparseMatrix identity(int n);
    static SparseMatrix zero(int r, int c) { return SparseMatrix(r, c); }

    bool operator==(const SparseMatrix& o) const;

  private:
    bool dirty_ = false;
};

// Plain int64 triplets; the Cech engine assembles its blocks in this form
// after clearing denominators column-wise (a rank-preserving scaling).
struct TripletsI64 {
    int rows = 0;
    int cols = 0;
    std::vector<std::tuple<uint32_t, uint32_t, int64_t>> t;
    int64_t entry_count() const { return (int64_t)t.size(); }
};

} // namespace exactalg

#endif
