#include "curvlab/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace curvlab {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw parse_error("invalid JSON");
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TensorFile parse_tensor_json(const std::string& text) {
    const json j = parse_or_throw(text);
    try {
        TensorFile f;
        f.m = j.at("m").get<int>();
        const int rank = j.at("rank").get<int>();
        if (rank < 1 || rank > 5) throw parse_error("tensor rank must be in 1..5");
        f.tensor = DenseTensor::from_data(f.m, rank, j.at("data").get<std::vector<double>>());
        if (j.contains("g")) {
            const auto rows = j.at("g").get<std::vector<std::vector<double>>>();
            if (static_cast<int>(rows.size()) != f.m) throw parse_error("metric row count != m");
            Matrix g(f.m);
            for (int r = 0; r < f.m; ++r) {
                if (static_cast<int>(rows[r].size()) != f.m)
                    throw parse_error("metric column count != m");
                for (int c = 0; c < f.m; ++c) g(r, c) = rows[r][c];
            }
            f.g = Metric(std::move(g));
            f.had_metric = true;
        } else {
            f.g = Metric::identity(f.m);
        }
        return f;
    } catch (const json::exception& e) {
        throw parse_error(std::string("tensor JSON: ") + e.what());
    } catch (const shape_error& e) {
        throw parse_error(std::string("tensor JSON: ") + e.what());
    }
}

TensorFile load_tensor_json(const std::string& path) { return parse_tensor_json(read_file(path)); }

std::string tensor_to_json(const DenseTensor& t, const Metric* g) {
    json j;
    j["m"] = t.dim();
    j["rank"] = t.rank();
    j["data"] = t.data();
    if (g != nullptr && !g->is_identity()) {
        std::vector<std::vector<double>> rows(t.dim(), std::vector<double>(t.dim()));
        for (int r = 0; r < t.dim(); ++r)
            for (int c = 0; c < t.dim(); ++c) rows[r][c] = g->g()(r, c);
        j["g"] = rows;
    }
    return j.dump(2);
}

void save_tensor_json(const std::string& path, const DenseTensor& t, const Metric* g) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write file: " + path);
    out << tensor_to_json(t, g) << '\n';
}

CurvJet parse_jet_json(const std::string& text) {
    const json j = parse_or_throw(text);
    try {
        const int m = j.at("m").get<int>();
        CurvJet jet;
        jet.T = CurvTensor(DenseTensor::from_data(m, 4, j.at("T").get<std::vector<double>>()));
        jet.D = DenseTensor::from_data(m, 5, j.at("D").get<std::vector<double>>());
        if (j.contains("flags")) {
            const json& f = j.at("flags");
            jet.satisfies_B2 = f.value("satisfies_B2", false);
            jet.satisfies_div0 = f.value("satisfies_div0", false);
        }
        return jet;
    } catch (const json::exception& e) {
        throw parse_error(std::string("jet JSON: ") + e.what());
    } catch (const shape_error& e) {
        throw parse_error(std::string("jet JSON: ") + e.what());
    }
}

std::string jet_to_json(const CurvJet& jet) {
    json j;
    j["m"] = jet.dim();
    j["T"] = jet.T.tensor().data();
    j["D"] = jet.D.data();
    j["flags"] = {{"satisfies_B2", jet.satisfies_B2}, {"satisfies_div0", jet.satisfies_div0}};
    return j.dump(2);
}

PolynomialMetric parse_polymetric_json(const std::string& text) {
    const json j = parse_or_throw(text);
    try {
        const int m = j.at("m").get<int>();
        const double radius = j.at("domain_radius").get<double>();
        std::vector<Polynomial> entries(static_cast<std::size_t>(m) * (m + 1) / 2, Polynomial(m));
        const auto index = [m](int i, int jj) {
            if (i > jj) std::swap(i, jj);
            return i * m - i * (i - 1) / 2 + (jj - i);
        };
        for (const json& t : j.at("terms")) {
            const int i = t.at("i").get<int>();
            const int jj = t.at("j").get<int>();
            if (i < 0 || i >= m || jj < 0 || jj >= m) throw parse_error("term index out of range");
            entries[index(i, jj)].add_term(t.at("exponents").get<std::vector<int>>(),
                                           t.at("coeff").get<double>());
        }
        return PolynomialMetric(m, std::move(entries), radius);
    } catch (const json::exception& e) {
        throw parse_error(std::string("metric JSON: ") + e.what());
    } catch (const shape_error& e) {
        throw parse_error(std::string("metric JSON: ") + e.what());
    }
}

std::string polymetric_to_json(const PolynomialMetric& pm) {
    json terms = json::array();
    for (int i = 0; i < pm.dim(); ++i)
        for (int jj = i; jj < pm.dim(); ++jj)
            for (const Polynomial::Term& t : pm.entry(i, jj).terms())
                terms.push_back(
                    {{"i", i}, {"j", jj}, {"exponents", t.exponents}, {"coeff", t.coeff}});
    json j;
    j["m"] = pm.dim();
    j["terms"] = std::move(terms);
    j["domain_radius"] = pm.domain_radius();
    return j.dump(2);
}

}  // namespace curvlab
