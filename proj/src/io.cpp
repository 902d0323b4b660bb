#include "jr/io.hpp"

namespace jr {

Json rat_json(const Rat& x) { return rat_to_string(x); }

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw std::invalid_argument("expected rational as string or integer");
}

Json quad_json(const QuadElem& x) {
    Json j;
    j["a"] = rat_json(x.a);
    j["b"] = rat_json(x.b);
    return j;
}

QuadElem quad_from_json(const Json& j, long d) {
    if (j.is_object())
        return QuadElem(d, rat_from_json(j.at("a")), j.contains("b") ? rat_from_json(j.at("b")) : Rat(0));
    return QuadElem(d, rat_from_json(j));
}

Json qmat_json(const QMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(rat_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

QMat qmat_from_json(const Json& j) {
    int r = static_cast<int>(j.size());
    int c = static_cast<int>(j.at(0).size());
    QMat m(r, c, Rat(0));
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < c; ++k) m(i, k) = rat_from_json(j.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)));
    return m;
}

Json fmat_json(const FMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(quad_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

FMat fmat_from_json(const Json& j, long d) {
    int r = static_cast<int>(j.size());
    int c = static_cast<int>(j.at(0).size());
    FMat m(r, c, QuadElem::zero(d));
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < c; ++k)
            m(i, k) = quad_from_json(j.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)), d);
    return m;
}

Json laurent_json(const LaurentX& f) {
    Json coeffs = Json::object();
    for (const auto& [k, c] : f.coeffs) coeffs[std::to_string(k)] = rat_json(c);
    Json j;
    j["coeffs"] = coeffs;
    return j;
}

Json loglinear_json(const LogLinear& x) {
    Json j;
    j["constant"] = rat_json(x.constant);
    Json logs = Json::object();
    for (const auto& [p, c] : x.logTerms) logs[std::to_string(p)] = rat_json(c);
    j["logs"] = logs;
    return j;
}

Json qexp_json(const QExp& f) {
    Json j;
    j["weight"] = f.weight;
    j["level"] = f.level;
    Json coeffs = Json::object();
    for (const auto& [xi, c] : f.coeffs) coeffs[rat_to_string(xi)] = loglinear_json(c);
    j["coeffs"] = coeffs;
    return j;
}

Json fpoly_json(const FPoly& f) {
    Json arr = Json::array();
    for (const auto& c : f.c) arr.push_back(quad_json(c));
    return arr;
}

FPoly fpoly_from_json(const Json& j, long d) {
    std::vector<QuadElem> c;
    for (const auto& x : j) c.push_back(quad_from_json(x, d));
    return FPoly(std::move(c));
}

Json invariant_json(const InvariantVector& iv) {
    Json j;
    j["charpoly"] = fpoly_json(iv.charpoly);
    Json mom = Json::array();
    for (const auto& a : iv.moments) mom.push_back(quad_json(a));
    j["moments"] = mom;
    return j;
}

InvariantVector invariants_from_json(const Json& j, long d) {
    InvariantVector iv;
    iv.charpoly = fpoly_from_json(j.at("charpoly"), d);
    for (const auto& x : j.at("moments")) iv.moments.push_back(quad_from_json(x, d));
    return iv;
}

}  // namespace jr
