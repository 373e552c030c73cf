#include "ulrich3/sparse.hpp"

#include <algorithm>

namespace exactalg {

void SparseMatrix::add(int r, int c, const u3::Rat& v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
        throw u3::EngineError("sparse entry out of range");
    if (v == 0) return;
    entries.push_back({r, c, v});
    dirty_ = true;
}

void SparseMatrix::canonicalize() {
    if (!dirty_) return;
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Entry> out;
    out.reserve(entries.size());
    for (auto& e : entries) {
        if (!out.empty() && out.back().row == e.row && out.back().col == e.col)
            out.back().v += e.v;
        else
            out.push_back(e);
    }
    entries.clear();
    for (auto& e : out)
        if (e.v != 0) entries.push_back(std::move(e));
    dirty_ = false;
}

u3::Rat SparseMatrix::at(int r, int c) const {
    u3::Rat acc = 0;
    for (const auto& e : entries)
        if (e.row == r && e.col == c) acc += e.v;
    return acc;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols, rows);
    for (const auto& e : entries) t.add(e.col, e.row, e.v);
    t.canonicalize();
    return t;
}

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.add(i, i, 1);
    m.canonicalize();
    return m;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
    SparseMatrix a = *this, b = o;
    a.canonicalize();
    b.canonicalize();
    if (a.rows != b.rows || a.cols != b.cols || a.entries.size() != b.entries.size())
        return false;
    for (size_t i = 0; i < a.entries.size(); ++i) {
        const auto& x = a.entries[i];
        const auto& y = b.entries[i];
        if (x.row != y.row || x.col != y.col || x.v != y.v) return false;
    }
    return true;
}

} // namespace exactalg
