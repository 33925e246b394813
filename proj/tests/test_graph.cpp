#include <doctest.h>

#include <random>

#include "bhk/graph.hpp"
#include "support.hpp"

using namespace bhk;
using bhk::testing::random_connected;
using bhk::testing::rose_with_rays;

namespace {

Multigraph path3() {
  Multigraph g;
  for (const char* v : {"u", "v", "w"}) g.add_vertex(v);
  g.add_edge("a", "u", "v");
  g.add_edge("b", "v", "w");
  return g;
}

Multigraph triangle() {
  Multigraph g;
  for (const char* v : {"a", "b", "c"}) g.add_vertex(v);
  g.add_edge("x", "a", "b");
  g.add_edge("y", "b", "c");
  g.add_edge("z", "c", "a");
  return g;
}

Presentation loop_ray() { return rose_with_rays(1, 1); }

Presentation rose3_tree() {
  Presentation p;
  p.core.add_vertex("v");
  p.core.add_vertex("w");
  for (const char* e : {"a", "b", "c"}) p.core.add_edge(e, "v", "v");
  p.core.add_edge("d", "v", "w");
  p.trees.push_back({"t", "w", 2});
  return p;
}

}  // namespace

TEST_SUITE("graph_model") {
  TEST_CASE("double of a single edge") {
    Multigraph g;
    g.add_vertex("u");
    g.add_vertex("v");
    g.add_edge("e", "u", "v");
    const DoubleGraph d = make_double(g);
    REQUIRE(d.edges().size() == 2);
    CHECK(d.edge("e").source == "u");
    CHECK(d.edge("e").range == "v");
    CHECK(d.edge("e").bar == "e~");
    CHECK(d.edge("e~").bar == "e");
    CHECK(d.edge("e~").source == "v");
  }

  TEST_CASE("double of a loop has two distinct directed loops") {
    Multigraph g;
    g.add_vertex("v");
    g.add_edge("u", "v", "v");
    const DoubleGraph d = make_double(g);
    REQUIRE(d.edges().size() == 2);
    CHECK(d.edge("u").bar == "u~");
    CHECK(d.edge("u").bar != "u");
    CHECK(d.edge("u~").source == "v");
    CHECK(d.edge("u~").range == "v");
  }

  TEST_CASE("double has 2n directed edges and a valid involution") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const Multigraph g = random_connected(rng);
      const DoubleGraph d = make_double(g);
      CHECK(d.edges().size() == 2 * g.edge_count());
      for (const auto& [id, e] : d.edges()) {
        const DirectedEdge& b = d.edge(e.bar);
        CHECK(b.bar == id);
        CHECK(e.bar != id);
        CHECK(b.source == e.range);
        CHECK(b.range == e.source);
      }
    }
  }

  TEST_CASE("double graph constructor rejects a broken involution") {
    CHECK_THROWS_AS(DoubleGraph({"v"}, {{"a", "v", "v", "a"}}), GraphError);
    CHECK_THROWS_AS(DoubleGraph({"u", "v"}, {{"a", "u", "v", "b"}, {"b", "u", "v", "a"}}),
                    GraphError);
  }

  TEST_CASE("betti numbers of finite graphs") {
    Multigraph rose2;
    rose2.add_vertex("v");
    rose2.add_edge("a", "v", "v");
    rose2.add_edge("b", "v", "v");
    CHECK(betti_finite(rose2) == 2);

    Multigraph edge;
    edge.add_vertex("u");
    edge.add_vertex("v");
    edge.add_edge("e", "u", "v");
    CHECK(betti_finite(edge) == 0);

    Multigraph two;
    for (const char* v : {"a", "b", "c", "d"}) two.add_vertex(v);
    two.add_edge("x", "a", "b");
    two.add_edge("y", "c", "d");
    CHECK(two.component_count() == 2);
    CHECK(betti_finite(two) == 0);

    CHECK(betti_finite(Multigraph{}) == 0);
    CHECK(betti_finite(triangle()) == 1);
  }

  TEST_CASE("multigraph validation") {
    Multigraph g;
    g.add_vertex("v");
    CHECK_THROWS_AS(g.add_edge("e", "v", "w"), GraphError);
    g.add_edge("e", "v", "v");
    CHECK_THROWS_AS(g.add_edge("e", "v", "v"), GraphError);
    CHECK(is_valid_user_id("v1"));
    CHECK_FALSE(is_valid_user_id("a~"));
    CHECK_FALSE(is_valid_user_id("r@1"));
    CHECK_FALSE(is_valid_user_id("r/1"));
    CHECK_FALSE(is_valid_user_id(""));
    CHECK(bar_id("x") == "x~");
    CHECK(bar_id("x~") == "x");
    CHECK(geometric_id("x~") == "x");
  }

  TEST_CASE("contraction examples") {
    const DoubleGraph p = contract_edge(make_double(path3()), "a");
    CHECK(p.vertices() == VertexSet{"u", "w"});
    CHECK(p.edges().size() == 2);
    CHECK(p.edge("b").source == "u");

    const DoubleGraph t = contract_edge(make_double(triangle()), "x");
    CHECK(t.vertices().size() == 2);
    CHECK(t.edges().size() == 4);
    CHECK(betti_finite(contract(triangle(), "x")) == 1);

    Multigraph lp;
    lp.add_vertex("v");
    lp.add_vertex("w");
    lp.add_edge("l", "v", "v");
    lp.add_edge("p", "v", "w");
    const Multigraph rose1 = contract(lp, "p");
    CHECK(rose1.vertex_count() == 1);
    CHECK(rose1.edge_count() == 1);
    CHECK(rose1.find_edge("l")->is_loop());

    CHECK_THROWS_WITH_AS(contract(lp, "l"), doctest::Contains("cannot contract loop"),
                         GraphError);
    CHECK_THROWS_WITH_AS(contract_edge(make_double(lp), "l~"),
                         doctest::Contains("cannot contract loop"), GraphError);
  }

  TEST_CASE("parallel edges between merged endpoints become loops") {
    Multigraph g;
    g.add_vertex("a");
    g.add_vertex("b");
    g.add_edge("p", "a", "b");
    g.add_edge("q", "a", "b");
    const DoubleGraph d = contract_edge(make_double(g), "p");
    CHECK(d.edge("q").source == d.edge("q").range);
  }

  TEST_CASE("double commutes with contraction") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
      const Multigraph g = random_connected(rng);
      for (const auto& [id, e] : g.edges()) {
        if (e.is_loop()) continue;
        CHECK(make_double(contract(g, id)) == contract_edge(make_double(g), id));
        CHECK(betti_finite(contract(g, id)) == betti_finite(g));
      }
    }
  }

  TEST_CASE("exhaustion steps") {
    const AmbientGraph amb(loop_ray());
    const Multigraph s0 = induced_subgraph(amb, {"v"});
    CHECK(s0.edge_count() == 1);
    const Multigraph s1 = exhaustion_next(amb, s0);
    CHECK(s1.edge_count() == 2);
    CHECK(s1.find_edge("r1/1") != nullptr);
    CHECK(s1.has_vertex("r1@1"));
    const Multigraph s2 = exhaustion_next(amb, s1);
    CHECK(s2.find_edge("r1/2") != nullptr);

    const Presentation fin = finite_presentation(triangle());
    const AmbientGraph famb(fin);
    CHECK(exhaustion_next(famb, triangle()) == triangle());

    Multigraph stranger;
    stranger.add_vertex("nowhere");
    CHECK_THROWS_AS(exhaustion_next(amb, stranger), GraphError);
  }

  TEST_CASE("betti_limit examples and seed independence") {
    const AmbientGraph lr(loop_ray());
    for (const VertexSet& seed : {VertexSet{"v"}, VertexSet{"r1@3"}}) {
      const BettiLimit b = betti_limit(lr, induced_subgraph(lr, seed), 32);
      CHECK(b.stabilized);
      CHECK(b.value == 1);
    }

    const AmbientGraph ray(rose_with_rays(0, 1));
    CHECK(betti_limit(ray, induced_subgraph(ray, {"v"}), 32).value == 0);

    const AmbientGraph rt(rose3_tree());
    for (const VertexSet& seed : {VertexSet{"v"}, VertexSet{"w"}, VertexSet{"t@1.2"}}) {
      const BettiLimit b = betti_limit(rt, induced_subgraph(rt, seed), 32);
      CHECK(b.stabilized);
      CHECK(b.value == 3);
    }
  }

  TEST_CASE("branching number") {
    CHECK(branching_number(finite_presentation(triangle())) == FreeRank(0));
    CHECK(branching_number(rose_with_rays(2, 3)) == FreeRank(3));
    CHECK(branching_number(rose3_tree()).is_omega());
  }

  TEST_CASE("presentation validation") {
    Presentation p = loop_ray();
    p.rays.push_back({"r2", "nowhere"});
    CHECK_THROWS_AS(p.validate(), GraphError);
    Presentation q = rose3_tree();
    q.trees.front().branching = 1;
    CHECK_THROWS_AS(q.validate(), GraphError);
  }

  TEST_CASE("ambient graph neighbourhoods") {
    const AmbientGraph amb(rose3_tree());
    CHECK(amb.has_vertex("t@1"));
    CHECK(amb.has_vertex("t@2.1"));
    CHECK_FALSE(amb.has_vertex("t@3"));
    CHECK(amb.level("t@2.1") == 2);
    CHECK(amb.level("v") == 0);
    CHECK(amb.incident("t@1").size() == 3);  // parent plus two children
    const auto e = amb.find_edge("t/2.1");
    REQUIRE(e.has_value());
    CHECK(e->u == "t@2");
    CHECK(e->v == "t@2.1");
    // Truncation at depth 2 adds 2 + 4 tree vertices.
    const Multigraph t2 = amb.truncation(2);
    CHECK(t2.vertex_count() == 2 + 6);
    CHECK(t2.edge_count() == 4 + 6);
  }

  TEST_CASE("black-and-white subgraphs") {
    const AmbientGraph amb(loop_ray());
    CHECK(bw_subgraph(amb, {}).edges.empty());

    const BwDoubleGraph b0 = bw_subgraph(amb, {"v"});
    CHECK(b0.edges.size() == 4);
    CHECK(b0.edges.at("u1").color == Color::black);
    CHECK(b0.edges.at("u1~").color == Color::black);
    CHECK(b0.edges.at("r1/1").color == Color::white);
    CHECK(b0.edges.at("r1/1~").color == Color::white);

    const BwDoubleGraph b1 = bw_extend(amb, b0);
    CHECK(b1.omega == VertexSet{"v", "r1@1"});
    CHECK(b1.edges.at("r1/1").color == Color::black);
    CHECK(b1.edges.at("r1/2").color == Color::white);
    CHECK(b1.edges.at("r1/2~").color == Color::white);

    const AmbientGraph fin(finite_presentation(triangle()));
    const BwDoubleGraph all = bw_subgraph(fin, {"a", "b", "c"});
    CHECK(all.black_count() == all.edges.size());
    CHECK(bw_extend(fin, all) == all);
  }

  TEST_CASE("bw invariants on random finite graphs") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
      const Multigraph g = random_connected(rng);
      const AmbientGraph amb(finite_presentation(g));
      const VertexSet omega{*g.vertices().begin()};
      const BwDoubleGraph b = bw_subgraph(amb, omega);

      VertexSet grown = omega;
      for (const auto& v : omega)
        for (const auto& e : amb.incident(v)) grown.insert(e.other(v));
      CHECK(bw_extend(amb, b) == bw_subgraph(amb, grown));

      for (const auto& [id, e] : b.edges) {
        CHECK(b.edges.count(e.edge.bar) == 1);
        CHECK(b.edges.at(e.edge.bar).color == e.color);
        const bool both_in =
            omega.count(e.edge.source) != 0 && omega.count(e.edge.range) != 0;
        CHECK((e.color == Color::black) == both_in);
        if (e.color != Color::black) continue;
        for (const auto& next : amb.out_edges(e.edge.range)) CHECK(b.edges.count(next.id) == 1);
      }

      // Iterated extension reaches the all-black graph within the diameter.
      BwDoubleGraph cur = b;
      for (std::size_t i = 0; i < g.vertex_count(); ++i) cur = bw_extend(amb, cur);
      CHECK(cur.black_count() == 2 * g.edge_count());
    }
  }
}
