#include "bifrac/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

#include "bifrac/errors.hpp"

namespace bifrac {

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

// fmt17 with a JSON-safe fallback for non-finite values.
std::string jnum(double v) {
    if (!std::isfinite(v)) return "null";
    return fmt17(v);
}

}  // namespace

std::string operator_to_json(const Mat& U) {
    std::ostringstream out;
    out << "{\"dim\": " << U.rows() << ", \"rows\": [";
    for (Eigen::Index r = 0; r < U.rows(); ++r) {
        if (r) out << ", ";
        out << "[";
        for (Eigen::Index c = 0; c < U.cols(); ++c) {
            if (c) out << ", ";
            out << "[" << jnum(U(r, c).real()) << ", " << jnum(U(r, c).imag()) << "]";
        }
        out << "]";
    }
    out << "]}";
    return out.str();
}

Mat operator_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("operator_from_json: parse failure: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("rows"))
        throw Error("operator_from_json: expected object with dim and rows");
    const int dim = j.at("dim").get<int>();
    if (dim < 1) throw DimTooSmall("operator_from_json: dim must be >= 1");
    const auto& rows = j.at("rows");
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
        throw Error("operator_from_json: rows size does not match dim");
    Mat U(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const auto& row = rows.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw Error("operator_from_json: row length does not match dim");
        for (int c = 0; c < dim; ++c) {
            const auto& cell = row.at(c);
            if (!cell.is_array() || cell.size() != 2)
                throw Error("operator_from_json: entries must be [re, im] pairs");
            U(r, c) = cplx(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return U;
}

std::string grid_to_csv(const PhaseSpaceGrid& g) {
    std::ostringstream out;
    out << "alpha,beta,re,im\n";
    for (int i = 0; i < g.alpha_axis.count; ++i) {
        const double a = g.alpha_axis.coord(i);
        for (int j = 0; j < g.beta_axis.count; ++j) {
            const cplx v = g.at(i, j);
            out << fmt17(a) << "," << fmt17(g.beta_axis.coord(j)) << ","
                << fmt17(v.real()) << "," << fmt17(v.imag()) << "\n";
        }
    }
    return out.str();
}

std::string grid_to_json(const PhaseSpaceGrid& g) {
    std::ostringstream out;
    auto axis = [&out](const char* name, const Axis& ax) {
        out << "\"" << name << "\": {\"lo\": " << jnum(ax.lo) << ", \"hi\": " << jnum(ax.hi)
            << ", \"count\": " << ax.count << "}";
    };
    out << "{\"axes\": {";
    axis("alpha", g.alpha_axis);
    out << ", ";
    axis("beta", g.beta_axis);
    out << "}, \"kind\": \"" << grid_kind_name(g.kind) << "\", ";
    if (!g.angles.has_value()) {
        out << "\"angles\": null, ";
    } else {
        out << "\"angles\": [" << jnum(g.angles->theta_alpha) << ", " << jnum(g.angles->theta_beta) << "], ";
    }
    out << "\"fock_dim\": " << g.fock_dim << ", \"trusted\": " << (g.trusted ? "true" : "false")
        << ", \"values\": [";
    for (int i = 0; i < g.alpha_axis.count; ++i) {
        for (int j = 0; j < g.beta_axis.count; ++j) {
            if (i || j) out << ", ";
            const cplx v = g.at(i, j);
            out << "[" << jnum(v.real()) << ", " << jnum(v.imag()) << "]";
        }
    }
    out << "]}";
    return out.str();
}

}  // namespace bifrac
