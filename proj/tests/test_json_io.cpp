#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "mcomp/json_io.hpp"

using namespace mcomp;
using namespace mcomp::io;
using Q = Rational;

TEST_CASE("atomic measures") {
  const auto j = load_json(R"({"type":"atomic","points":["a","b"],"weights":["1/2","-2/5"]})");
  const auto mu = parse_atomic<Q>(j);
  CHECK(mu == AtomicMeasure<Q>({"a", "b"}, {Q(1, 2), Q(-2, 5)}));
  CHECK(to_json(mu) == j);
  CHECK(parse_atomic<Q>(load_json(R"({"type":"atomic","points":["a"],"weights":[0.25]})"))[0] == Q(1, 4));
  CHECK(parse_atomic<Q>(load_json(R"({"type":"atomic","points":["a"],"weights":[3]})"))[0] == 3);
  CHECK(parse_atomic<Q>(load_json(R"({"type":"dyadic","depth":1,"leaves":["1","2"]})")).points() ==
        PointSet{"0", "1"});

  CHECK_THROWS_AS(parse_atomic<Q>(load_json(R"({"type":"atomic","points":["a","a"],"weights":["1","2"]})")),
                  ParseError);
  CHECK_THROWS_AS(parse_atomic<Q>(load_json(R"({"type":"atomic","points":["a"],"weights":["1/0"]})")), ParseError);
  CHECK_THROWS_AS(parse_atomic<Q>(load_json(R"({"type":"atomic","points":["a","b"],"weights":["1"]})")),
                  ParseError);
  CHECK_THROWS_AS(parse_atomic<Q>(load_json(R"({"type":"blob"})")), ParseError);
  CHECK_THROWS_AS(load_json("{not json"), ParseError);
  CHECK_THROWS_AS(load_json("/nonexistent/file.json"), ParseError);
}

TEST_CASE("dyadic measures") {
  const auto j = load_json(R"({"type":"dyadic","depth":2,"leaves":["2/5","-1/10","-3/10","1/5"]})");
  const auto mu = parse_dyadic<Q>(j);
  CHECK(mu.depth() == 2);
  CHECK(mu[1] == Q(-1, 10));
  CHECK(to_json(mu) == j);
  CHECK_THROWS_AS(parse_dyadic<Q>(load_json(R"({"type":"dyadic","depth":2,"leaves":["1","2","3"]})")), ParseError);
  const auto atomic = load_json(R"({"type":"atomic","points":["1","0"],"weights":["5","7"]})");
  CHECK(parse_dyadic<Q>(atomic) == DyadicMeasure<Q>(1, {7, 5}));
  CHECK_THROWS_AS(parse_dyadic<Q>(load_json(R"({"type":"atomic","points":["a"],"weights":["1"]})")), ParseError);
}

TEST_CASE("functions, operators, quotients") {
  const auto f = parse_function<Q>(load_json(R"({"points":["a","b"],"values":["1","-1/2"]})"));
  CHECK(f == GridFunction<Q>({"a", "b"}, {1, Q(-1, 2)}));
  CHECK(parse_function<Q>(to_json(f)) == f);

  const auto T = parse_operator<Q>(load_json(R"({"points":["a","b"],"rows":[["1/2","-1/2"],["0","1"]]})"));
  CHECK(T.row(0)[1] == Q(-1, 2));
  CHECK(parse_operator<Q>(to_json(T)) == T);
  CHECK_THROWS_AS(parse_operator<Q>(load_json(R"({"points":["a","b"],"rows":[["1"],["0","1"]]})")), ParseError);

  const auto q = parse_quotient<Q>(load_json(R"({"phi":{"a":"x","b":"x"},"weights":{"x":{"a":"1/2","b":"1/2"}}})"));
  CHECK(q.source_points == PointSet{"a", "b"});
  CHECK(q.target_points == PointSet{"x"});
  CHECK(q.weight_of(1) == Q(1, 2));
  const auto back = parse_quotient<Q>(to_json(q));
  CHECK(back.phi == q.phi);
  CHECK(back.weights == q.weights);
  CHECK_THROWS_AS(parse_quotient<Q>(load_json(R"({"phi":{"a":"x"},"weights":{"x":{"zz":"1"}}})")), ParseError);
}

TEST_CASE("fields") {
  const auto F = parse_field<Q>(load_json(
      R"({"window":8,"f_infinity":{"atoms":{"g1":"1/2","inf":"1/4"}},"exceptions":{"g4":{"atoms":{"g1":"1/2","g7":"1/4"}}}})"));
  CHECK(F.window == 8);
  CHECK(F.f_infinity.at(kInfinity) == Q(1, 4));
  CHECK(F.exceptions.at(4).at(7) == Q(1, 4));
  const auto again = parse_field<Q>(to_json(F));
  CHECK(again.f_infinity == F.f_infinity);
  CHECK(again.exceptions == F.exceptions);

  const auto plain = parse_field<Q>(load_json(R"({"f_infinity":{"atoms":{"g3":"1"}},"exceptions":{"5":{"atoms":{"g2":"1"}}}})"));
  CHECK(plain.window == 6);
  CHECK(plain.exceptions.count(5) == 1);
  CHECK_THROWS_AS(parse_field<Q>(load_json(R"({"window":2,"f_infinity":{"atoms":{"g3":"1"}}})")), ParseError);
  CHECK_THROWS_AS(parse_field<Q>(load_json(R"({"f_infinity":{"atoms":{"x":"1"}}})")), ParseError);
}

TEST_CASE("metric samples and triples") {
  const auto m = parse_metric<Q>(load_json(R"({"points":["p","q","r"],"coords":["0","1/2","1"]})"));
  CHECK(m.rho(0, 2) == 1);
  const auto m2 = parse_metric<Q>(to_json(m));
  CHECK(m2.matrix() == m.matrix());
  CHECK_THROWS_AS(parse_metric<Q>(load_json(R"({"points":["p","q"],"rho":[["0","1"],["2","0"]]})")), ParseError);

  const auto t = parse_triples(load_json(R"([["p","q","r"],["r","p","q"]])"), m.points());
  REQUIRE(t.size() == 2);
  CHECK(t[1] == Triple{2, 0, 1});
  CHECK_THROWS_AS(parse_triples(load_json(R"([["p","q"]])"), m.points()), ParseError);
  CHECK_THROWS_AS(parse_triples(load_json(R"([["p","q","zz"]])"), m.points()), ParseError);
}

TEST_CASE("files and double round trip") {
  const std::string path = "test_json_io_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"type":"atomic","points":["a"],"weights":["1/3"]})";
  }
  CHECK(parse_atomic<Q>(load_json(path))[0] == Q(1, 3));
  std::remove(path.c_str());

  const AtomicMeasure<double> d({"a", "b"}, {0.1, -1.0 / 3.0});
  const auto back = parse_atomic<double>(to_json(d));
  CHECK(back[0] == 0.1);
  CHECK(back[1] == -1.0 / 3.0);
  CHECK(dump(Json::array({1})).back() == '\n');
}

TEST_CASE("repair reports carry certificates") {
  FunctionalRepair<Q> r{GridFunction<Q>({"a"}, {1}), AtomicMeasure<Q>({"a"}, {1}), 0, 0, 1, 1, 1};
  const auto j = to_json(r, Q(1, 2));
  CHECK(j.contains("certificates"));
  CHECK(j.dump().find("\"1/2\"") != std::string::npos);
}
