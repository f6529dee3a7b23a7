#include <doctest.h>

#include <cmath>

#include "curvlab/json_io.hpp"
#include "curvlab/models.hpp"
#include "curvlab/rng.hpp"

using namespace curvlab;

TEST_CASE("tensor JSON: bitwise round trip") {
    const CurvTensor t = random_curvature_tensor(4, 123);
    const std::string text = tensor_to_json(t.tensor());
    const TensorFile f = parse_tensor_json(text);
    CHECK(f.m == 4);
    CHECK(f.tensor.rank() == 4);
    CHECK_FALSE(f.had_metric);
    CHECK(f.tensor.data() == t.tensor().data());  // bitwise
}

TEST_CASE("tensor JSON: metric block round trip") {
    Matrix g(3);
    g(0, 0) = 4.0;
    g(1, 1) = 1.0;
    g(2, 2) = 2.0;
    g(0, 1) = g(1, 0) = 0.5;
    const Metric metric(g);
    const DenseTensor t = random_tensor(3, 2, 9);
    const TensorFile f = parse_tensor_json(tensor_to_json(t, &metric));
    CHECK(f.had_metric);
    CHECK(f.tensor.data() == t.data());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(f.g.g()(i, j) == metric.g()(i, j));
}

TEST_CASE("tensor JSON: parse failures") {
    CHECK_THROWS_AS(parse_tensor_json("not json"), parse_error);
    CHECK_THROWS_AS(parse_tensor_json("{\"m\": 3}"), parse_error);
    CHECK_THROWS_AS(parse_tensor_json("{\"m\": 3, \"rank\": 6, \"data\": []}"), parse_error);
    CHECK_THROWS_AS(parse_tensor_json("{\"m\": 3, \"rank\": 2, \"data\": [1, 2]}"), parse_error);
    CHECK_THROWS_AS(load_tensor_json("/nonexistent/path.json"), parse_error);
}

TEST_CASE("jet JSON: round trip with flags") {
    const CurvJet j = random_jet(4, 17, true, true);
    const CurvJet back = parse_jet_json(jet_to_json(j));
    CHECK(back.D.data() == j.D.data());
    CHECK(back.T.tensor().data() == j.T.tensor().data());
    CHECK(back.satisfies_B2);
    CHECK(back.satisfies_div0);
}

TEST_CASE("polynomial metric JSON: values agree after round trip") {
    const PolynomialMetric pm = PolynomialMetric::random_perturbation(3, 0.05, 55);
    const PolynomialMetric back = parse_polymetric_json(polymetric_to_json(pm));
    CHECK(back.dim() == pm.dim());
    CHECK(back.domain_radius() == pm.domain_radius());
    Rng rng(77, 0);
    for (int c = 0; c < 20; ++c) {
        std::vector<double> x(3);
        for (double& v : x) v = 0.1 * rng.normal();
        const Matrix a = pm.metric_at(x), b = back.metric_at(x);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(a(i, j) == b(i, j));
    }
}
