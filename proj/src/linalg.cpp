#include "coarsemod/linalg.hpp"

namespace coarsemod {

namespace {

std::vector<std::vector<mpz_class>> identityMat(size_t n) {
    std::vector<std::vector<mpz_class>> I(n, std::vector<mpz_class>(n, 0));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

}  // namespace

SmithResult smithForm(std::vector<std::vector<mpz_class>> A) {
    size_t m = A.size(), n = m ? A[0].size() : 0;
    SmithResult res;
    res.U = identityMat(m);
    res.V = identityMat(n);
    auto& U = res.U;
    auto& V = res.V;

    auto negRow = [&](size_t i) {
        for (auto& x : A[i]) x = -x;
        for (auto& x : U[i]) x = -x;
    };
    auto swapRows = [&](size_t i, size_t j) {
        if (i == j) return;
        std::swap(A[i], A[j]);
        std::swap(U[i], U[j]);
    };
    auto swapCols = [&](size_t i, size_t j) {
        if (i == j) return;
        for (size_t r = 0; r < m; ++r) std::swap(A[r][i], A[r][j]);
        for (size_t r = 0; r < n; ++r) std::swap(V[r][i], V[r][j]);
    };
    auto addRow = [&](size_t dst, size_t src, const mpz_class& c) {  // row dst += c*row src
        for (size_t k = 0; k < n; ++k) A[dst][k] += c * A[src][k];
        for (size_t k = 0; k < m; ++k) U[dst][k] += c * U[src][k];
    };
    auto addCol = [&](size_t dst, size_t src, const mpz_class& c) {  // col dst += c*col src
        for (size_t r = 0; r < m; ++r) A[r][dst] += c * A[r][src];
        for (size_t r = 0; r < n; ++r) V[r][dst] += c * V[r][src];
    };

    size_t rank = std::min(m, n);
    for (size_t t = 0; t < rank; ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block to (t,t)
            bool found = false;
            size_t bi = t, bj = t;
            for (size_t i = t; i < m; ++i)
                for (size_t j = t; j < n; ++j) {
                    if (A[i][j] == 0) continue;
                    if (!found || cmp(abs(A[i][j]), abs(A[bi][bj])) < 0) {
                        found = true;
                        bi = i;
                        bj = j;
                    }
                }
            if (!found) {
                rank = t;
                break;
            }
            swapRows(t, bi);
            swapCols(t, bj);
            if (A[t][t] < 0) negRow(t);

            bool clean = true;
            for (size_t i = t + 1; i < m; ++i) {
                if (A[i][t] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), A[i][t].get_mpz_t(), A[t][t].get_mpz_t());
                addRow(i, t, -q);
                if (A[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < n; ++j) {
                if (A[t][j] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), A[t][j].get_mpz_t(), A[t][t].get_mpz_t());
                addCol(j, t, -q);
                if (A[t][j] != 0) clean = false;
            }
            if (!clean) continue;

            // enforce divisibility into the trailing block
            bool redo = false;
            for (size_t i = t + 1; i < m && !redo; ++i)
                for (size_t j = t + 1; j < n && !redo; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        addCol(t, j, 1);
                        redo = true;
                    }
            if (!redo) break;
        }
        if (t >= rank) break;
    }

    res.D = std::move(A);
    return res;
}

}  // namespace coarsemod
