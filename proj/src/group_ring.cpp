#include "coarsemod/group_ring.hpp"

#include <map>
#include <sstream>

namespace coarsemod {

std::string freeVecStr(const FreeVec& v) {
    if (v.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [c, a] : v) {
        if (!first) os << " + ";
        first = false;
        os << a.str() << "*" << c.g.str() << "@" << c.slot;
    }
    return os.str();
}

nlohmann::json freeVecToJson(const FreeVec& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& [c, a] : v)
        arr.push_back({{"word", c.g.str()}, {"slot", c.slot}, {"coeff", a.str()}});
    return arr;
}

FreeVec freeVecFromJson(const GroupPtr& G, const Ring& R, const nlohmann::json& j) {
    std::map<Coord, Scalar> acc;
    for (auto& t : j) {
        bool obj = t.is_object();
        Coord c{G->parseElement((obj ? t.at("word") : t.at(0)).get<std::string>()),
                (obj ? t.at("slot") : t.at(1)).get<int>()};
        Scalar a = R.parseScalar((obj ? t.at("coeff") : t.at(2)).get<std::string>());
        auto [it, fresh] = acc.emplace(c, a);
        if (!fresh) it->second = R.add(it->second, a);
    }
    FreeVec v;
    for (auto& [c, a] : acc)
        if (!R.isZero(a)) v.emplace_back(c, a);
    return v;
}

FreeVec translate(const GroupElement& gamma, const FreeVec& v) {
    FreeVec out;
    out.reserve(v.size());
    for (auto& [c, a] : v) out.emplace_back(Coord{gamma.mul(c.g), c.slot}, a);
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
    return out;
}

std::vector<GroupElement> supportOf(const FreeVec& v) {
    std::vector<GroupElement> out;
    out.reserve(v.size());
    for (auto& [c, a] : v) out.push_back(c.g);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int supportRadius(const FreeVec& v) {
    int r = 0;
    for (auto& [c, a] : v) r = std::max(r, c.g.wordLength());
    return r;
}

GroupRingElement GroupRingElement::one(const GroupPtr& G, const Ring& R) {
    return monomial(G, R, G->identity(), R.one());
}

GroupRingElement GroupRingElement::monomial(const GroupPtr& G, const Ring& R,
                                            const GroupElement& g, const Scalar& c) {
    GroupRingElement x(G, R);
    Scalar cc = R.canon(c);
    if (!R.isZero(cc)) x.terms.emplace_back(g, cc);
    return x;
}

void GroupRingElement::normalize() {
    std::map<GroupElement, Scalar> acc;
    for (auto& [g, c] : terms) {
        auto [it, fresh] = acc.emplace(g, c);
        if (!fresh) it->second = R.add(it->second, c);
    }
    terms.clear();
    for (auto& [g, c] : acc)
        if (!R.isZero(c)) terms.emplace_back(g, c);
}

GroupRingElement GroupRingElement::add(const GroupRingElement& o) const {
    GroupRingElement out(G, R);
    out.terms = terms;
    out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
    out.normalize();
    return out;
}

GroupRingElement GroupRingElement::sub(const GroupRingElement& o) const { return add(o.neg()); }

GroupRingElement GroupRingElement::neg() const {
    GroupRingElement out(G, R);
    out.terms = terms;
    for (auto& [g, c] : out.terms) c = R.neg(c);
    return out;
}

GroupRingElement GroupRingElement::scale(const Scalar& s) const {
    GroupRingElement out(G, R);
    for (auto& [g, c] : terms) {
        Scalar p = R.mul(c, s);
        if (!R.isZero(p)) out.terms.emplace_back(g, p);
    }
    return out;
}

GroupRingElement GroupRingElement::mul(const GroupRingElement& o) const {
    GroupRingElement out(G, R);
    for (auto& [g, a] : terms)
        for (auto& [h, b] : o.terms) out.terms.emplace_back(g.mul(h), R.mul(a, b));
    out.normalize();
    return out;
}

GroupRingElement GroupRingElement::translated(const GroupElement& gamma) const {
    GroupRingElement out(G, R);
    for (auto& [g, c] : terms) out.terms.emplace_back(gamma.mul(g), c);
    out.normalize();
    return out;
}

int GroupRingElement::supportRadius() const {
    int r = 0;
    for (auto& [g, c] : terms) r = std::max(r, g.wordLength());
    return r;
}

std::string GroupRingElement::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [g, c] : terms) {
        if (!first) os << " + ";
        first = false;
        if (g.isIdentity()) os << c.str();
        else if (R.isOne(c)) os << g.str();
        else os << c.str() << "*" << g.str();
    }
    return os.str();
}

nlohmann::json GroupRingElement::toJson() const {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& [g, c] : terms) arr.push_back({{"word", g.str()}, {"coeff", c.str()}});
    return arr;
}

GroupRingElement GroupRingElement::parse(const GroupPtr& G, const Ring& R,
                                         const std::string& text) {
    GroupRingElement out(G, R);
    std::vector<std::string> parts;
    std::string buf;
    char prevSig = 0;  // last non-space char of the current buffer
    for (char ch : text) {
        if (ch == '+' && !buf.empty()) {
            parts.push_back(buf);
            buf.clear();
            prevSig = 0;
            continue;
        }
        if (ch == '-' && !buf.empty() && prevSig != '^' && prevSig != '*' && prevSig != '/' &&
            prevSig != 0) {
            parts.push_back(buf);
            buf = "-";
            prevSig = '-';
            continue;
        }
        buf += ch;
        if (!std::isspace((unsigned char)ch)) prevSig = ch;
    }
    if (!buf.empty()) parts.push_back(buf);

    auto squeeze = [](const std::string& s) {
        std::string t;
        for (char ch : s)
            if (!std::isspace((unsigned char)ch)) t += ch;
        return t;
    };

    for (auto& raw : parts) {
        std::string term = squeeze(raw);
        if (term.empty() || term == "0") continue;
        Scalar coeff = R.one();
        std::string word;
        auto star = term.find('*');
        if (star != std::string::npos) {
            coeff = R.parseScalar(term.substr(0, star));
            word = term.substr(star + 1);
        } else {
            bool scalarLike = true;
            for (char ch : term)
                if (!std::isdigit((unsigned char)ch) && ch != '-' && ch != '/') scalarLike = false;
            if (scalarLike) {
                coeff = R.parseScalar(term);
                word = "e";
            } else if (term[0] == '-') {
                coeff = R.neg(R.one());
                word = term.substr(1);
            } else {
                word = term;
            }
        }
        out = out.add(monomial(G, R, G->parseElement(word), coeff));
    }
    return out;
}

GroupRingElement GroupRingElement::fromJson(const GroupPtr& G, const Ring& R,
                                            const nlohmann::json& j) {
    if (j.is_string()) return parse(G, R, j.get<std::string>());
    GroupRingElement out(G, R);
    for (auto& t : j) {
        nlohmann::json gw = t.is_object() ? t.at("word") : t.at(0);
        nlohmann::json cw = t.is_object() ? t.at("coeff") : t.at(1);
        GroupElement g = G->parseElement(gw.get<std::string>());
        Scalar c = R.parseScalar(cw.is_string() ? cw.get<std::string>() : cw.dump());
        out.terms.emplace_back(g, R.canon(c));
    }
    out.normalize();
    return out;
}

GroupRingMatrix::GroupRingMatrix(GroupPtr g, Ring r, int m, int n)
    : G(std::move(g)), R(std::move(r)), rows(m), cols(n) {
    entries.assign((size_t)m * n, GroupRingElement(G, R));
}

GroupRingMatrix GroupRingMatrix::identity(const GroupPtr& G, const Ring& R, int n) {
    GroupRingMatrix A(G, R, n, n);
    for (int i = 0; i < n; ++i) A.at(i, i) = GroupRingElement::one(G, R);
    return A;
}

GroupRingMatrix GroupRingMatrix::mul(const GroupRingMatrix& o) const {
    if (cols != o.rows) throw std::invalid_argument("matrix shape mismatch");
    GroupRingMatrix C(G, R, rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < o.cols; ++j) {
            GroupRingElement s(G, R);
            for (int k = 0; k < cols; ++k) s = s.add(at(i, k).mul(o.at(k, j)));
            C.at(i, j) = std::move(s);
        }
    return C;
}

GroupRingMatrix GroupRingMatrix::add(const GroupRingMatrix& o) const {
    if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix shape mismatch");
    GroupRingMatrix C(G, R, rows, cols);
    for (size_t i = 0; i < entries.size(); ++i) C.entries[i] = entries[i].add(o.entries[i]);
    return C;
}

GroupRingMatrix GroupRingMatrix::sub(const GroupRingMatrix& o) const {
    if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix shape mismatch");
    GroupRingMatrix C(G, R, rows, cols);
    for (size_t i = 0; i < entries.size(); ++i) C.entries[i] = entries[i].sub(o.entries[i]);
    return C;
}

bool GroupRingMatrix::operator==(const GroupRingMatrix& o) const {
    return rows == o.rows && cols == o.cols && entries == o.entries;
}

bool GroupRingMatrix::isIdempotent() const {
    return rows == cols && mul(*this) == *this;
}

FreeVec GroupRingMatrix::applyToBasis(const Coord& c) const {
    if (c.slot < 0 || c.slot >= rows) throw std::out_of_range("basis slot out of range");
    std::map<Coord, Scalar> acc;
    for (int j = 0; j < cols; ++j)
        for (auto& [h, b] : at(c.slot, j).terms) {
            Coord out{c.g.mul(h), j};
            auto [it, fresh] = acc.emplace(out, b);
            if (!fresh) it->second = R.add(it->second, b);
        }
    FreeVec v;
    for (auto& [k, a] : acc)
        if (!R.isZero(a)) v.emplace_back(k, a);
    return v;
}

FreeVec GroupRingMatrix::apply(const FreeVec& v) const {
    std::map<Coord, Scalar> acc;
    for (auto& [c, a] : v) {
        if (c.slot < 0 || c.slot >= rows) throw std::out_of_range("vector slot out of range");
        for (int j = 0; j < cols; ++j)
            for (auto& [h, b] : at(c.slot, j).terms) {
                Coord out{c.g.mul(h), j};
                Scalar p = R.mul(a, b);
                auto [it, fresh] = acc.emplace(out, p);
                if (!fresh) it->second = R.add(it->second, p);
            }
    }
    FreeVec w;
    for (auto& [k, a] : acc)
        if (!R.isZero(a)) w.emplace_back(k, a);
    return w;
}

int GroupRingMatrix::maxSupportRadius() const {
    int r = 0;
    for (auto& x : entries) r = std::max(r, x.supportRadius());
    return r;
}

nlohmann::json GroupRingMatrix::toJson() const {
    nlohmann::json trips = nlohmann::json::array();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const auto& x = at(i, j);
            if (x.isZero()) continue;
            trips.push_back({{"row", i}, {"col", j}, {"entry", x.toJson()}});
        }
    return {{"rows", rows}, {"cols", cols}, {"entries", std::move(trips)}};
}

GroupRingMatrix GroupRingMatrix::fromJson(const GroupPtr& G, const Ring& R,
                                          const nlohmann::json& j) {
    if (j.is_array()) {
        // bare row-list form
        int m = (int)j.size();
        int n = m ? (int)j.at(0).size() : 0;
        GroupRingMatrix A(G, R, m, n);
        for (int i = 0; i < m; ++i) {
            if ((int)j.at(i).size() != n) throw std::invalid_argument("ragged matrix");
            for (int k = 0; k < n; ++k) A.at(i, k) = GroupRingElement::fromJson(G, R, j.at(i).at(k));
        }
        return A;
    }
    int m = j.at("rows").get<int>(), n = j.at("cols").get<int>();
    GroupRingMatrix A(G, R, m, n);
    const auto& e = j.at("entries");
    bool triplets = !e.empty() && e.at(0).is_object() && e.at(0).contains("row");
    if (triplets || e.empty()) {
        for (const auto& t : e) {
            int r = t.at("row").get<int>(), c = t.at("col").get<int>();
            if (r < 0 || r >= m || c < 0 || c >= n)
                throw std::invalid_argument("matrix entry out of range");
            A.at(r, c) = GroupRingElement::fromJson(G, R, t.at("entry"));
        }
        return A;
    }
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < n; ++k) A.at(i, k) = GroupRingElement::fromJson(G, R, e.at(i).at(k));
    return A;
}

}  // namespace coarsemod
