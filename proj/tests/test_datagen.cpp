#include <catch2/catch_amalgamated.hpp>

#include <bnlearn/datagen.hpp>
#include <bnlearn/io.hpp>

#include "oracles.hpp"

#include <sstream>

using namespace bnlearn;
using Catch::Approx;

namespace {

bool connected(const NetworkStructure& s) {
    const std::size_t n = s.size();
    std::vector<std::vector<VarIndex>> adj(n);
    for (VarIndex i = 0; i < n; ++i) {
        for (VarIndex p : s.parents(i)) {
            adj[i].push_back(p);
            adj[p].push_back(i);
        }
    }
    std::vector<char> seen(n, 0);
    std::vector<VarIndex> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        VarIndex v = stack.back();
        stack.pop_back();
        for (VarIndex w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

}  // namespace

TEST_CASE("random structure edge cases and determinism") {
    CHECK(random_structure(1, 3, 5).arc_count() == 0);
    CHECK(random_structure(10, 3, 42) == random_structure(10, 3, 42));
    CHECK(random_structure(2, 1, 9).arc_count() == 1);
    bool differs = false;
    for (Seed s = 1; s <= 5 && !differs; ++s) differs = !(random_structure(10, 3, s) == random_structure(10, 3, s + 100));
    CHECK(differs);
}

TEST_CASE("random structures are connected, acyclic and capped") {
    std::size_t arcs = 0;
    for (Seed seed = 0; seed < 1000; ++seed) {
        auto s = random_structure(10, 3, seed);
        CHECK_NOTHROW(topological_order(s.parent_sets()));
        CHECK(s.max_parent_count() <= 3);
        CHECK(connected(s));
        arcs += s.arc_count();
    }
    // Roughly two parents per node minus the cap and the first nodes.
    CHECK(arcs / 1000.0 > 9.0);
    CHECK(arcs / 1000.0 < 20.0);
}

TEST_CASE("random CPTs are proper and bounded away from zero") {
    for (Seed seed = 0; seed < 50; ++seed) {
        auto s = random_structure(8, 3, seed);
        auto net = random_cpts(s, seed + 1000);
        for (VarIndex i = 0; i < s.size(); ++i) {
            const auto& cpt = net.cpt(i);
            for (std::size_t j = 0; j < cpt.rows(); ++j) {
                double sum = 0.0;
                for (double p : cpt.row(j)) {
                    CHECK(p >= 0.01);
                    sum += p;
                }
                CHECK(sum == Approx(1.0).margin(1e-9));
            }
        }
        CHECK(random_cpts(s, seed + 1000).cpt(0) == net.cpt(0));
    }
    auto ternary = random_cpts(random_structure(4, 2, 3, 3), 11);
    for (VarIndex i = 0; i < 4; ++i) {
        for (double p : ternary.cpt(i).values()) CHECK(p >= cpt_floor(3));
    }
}

TEST_CASE("forward sampling") {
    NetworkStructure s(std::vector<Variable>{{"x", 2}, {"y", 2}});
    BayesNet fair(s, {Cpt(1, 2, {0.5, 0.5}), Cpt(1, 2, {0.0, 1.0})});
    CHECK(forward_sample(fair, 0, 1).case_count() == 0);
    auto db = forward_sample(fair, 10000, 7);
    std::size_t ones = 0;
    for (std::size_t c = 0; c < db.case_count(); ++c) {
        ones += db.value(c, 0);
        CHECK(db.value(c, 1) == 1);
    }
    CHECK(ones / 10000.0 == Approx(0.5).margin(0.015));
    CHECK(forward_sample(fair, 100, 7) == forward_sample(fair, 100, 7));
}

TEST_CASE("forward sampling reproduces the joint distribution") {
    auto net = oracle::random_positive_net(4, 2, 31);
    const std::size_t n = 100000;
    auto db = forward_sample(net, n, 32);
    auto joint = oracle::joint_table(net);
    std::vector<double> freq(joint.size(), 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t idx = 0;
        for (VarIndex v = 0; v < 4; ++v) idx = idx * 2 + db.value(c, v);
        freq[idx] += 1.0 / static_cast<double>(n);
    }
    double tv = 0.0;
    for (std::size_t k = 0; k < joint.size(); ++k) tv += std::abs(joint[k] - freq[k]);
    CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("adversarial database D1") {
    auto db = adversarial_db(1);
    REQUIRE(db.case_count() == 2);
    CHECK(db.variables()[0].name == "x1");
    CHECK(db.variables()[1].name == "y");
    CHECK((db.value(0, 0) == 0 && db.value(0, 1) == 0));
    CHECK((db.value(1, 0) == 1 && db.value(1, 1) == 1));
}

TEST_CASE("adversarial database D7 case layout") {
    // Columns x7 x6 ... x1 y, top row first.
    const int table[14][8] = {
        {0, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0, 0, 1}, {1, 0, 0, 0, 0, 0, 0, 1},
        {1, 1, 0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 0, 0, 0, 0, 1}, {1, 1, 1, 0, 0, 0, 0, 1},
        {1, 1, 1, 1, 0, 0, 0, 0}, {1, 1, 1, 1, 0, 0, 0, 0}, {1, 1, 1, 1, 1, 0, 0, 1}, {1, 1, 1, 1, 1, 0, 0, 1},
        {1, 1, 1, 1, 1, 1, 0, 0}, {1, 1, 1, 1, 1, 1, 1, 1},
    };
    auto db = adversarial_db(7);
    REQUIRE(db.case_count() == 14);
    REQUIRE(db.variable_count() == 8);
    for (std::size_t c = 0; c < 14; ++c) {
        for (std::size_t col = 0; col < 7; ++col) CHECK(db.value(c, 6 - col) == static_cast<std::size_t>(table[c][col]));
        CHECK(db.value(c, 7) == static_cast<std::size_t>(table[c][7]));
    }
}

TEST_CASE("adversarial databases grow by one variable and two cases") {
    for (std::size_t j = 1; j <= 10; ++j) {
        auto db = adversarial_db(j);
        CHECK(db.case_count() == 2 * j);
        CHECK(db.variable_count() == j + 1);
    }
    CHECK_THROWS_AS(adversarial_db(0), Error);
}

TEST_CASE("database text round trip") {
    auto net = oracle::random_positive_net(5, 2, 3);
    auto db = forward_sample(net, 50, 4);
    std::stringstream buf;
    write_database(buf, db);
    CHECK(read_database(buf) == db);
}

TEST_CASE("database parse errors carry line numbers") {
    std::istringstream bad_header("a:2,b\n0,1\n");
    CHECK_THROWS_AS(read_database(bad_header), ParseError);
    std::istringstream short_row("a:2,b:2\n0,1\n1\n");
    try {
        read_database(short_row);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream out_of_range("a:2,b:2\n0,2\n");
    CHECK_THROWS_AS(read_database(out_of_range), SchemaError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_database(empty), ParseError);
}

TEST_CASE("network text round trip is exact") {
    for (Seed seed = 1; seed <= 10; ++seed) {
        auto net = random_cpts(random_structure(7, 3, seed, 3), seed);
        std::stringstream buf;
        write_network(buf, net);
        auto back = read_network(buf);
        CHECK(back.structure() == net.structure());
        for (VarIndex i = 0; i < 7; ++i) CHECK(back.cpt(i) == net.cpt(i));
    }
}

TEST_CASE("network parse errors") {
    std::istringstream no_header("var a 2\n");
    CHECK_THROWS_AS(read_network(no_header), ParseError);
    std::istringstream unknown("bn 1\nvar a 2\nparents a\nfoo a\n");
    CHECK_THROWS_AS(read_network(unknown), ParseError);
    std::istringstream missing_row("bn 1\nvar a 2\nparents a\n");
    CHECK_THROWS_AS(read_network(missing_row), SchemaError);
    std::istringstream missing_parents("bn 1\nvar a 2\n");
    CHECK_THROWS_AS(read_network(missing_parents), SchemaError);
    std::istringstream bad_sum("bn 1\nvar a 2\nparents a\ncpt a 0 0.3 0.3\n");
    CHECK_THROWS_AS(read_network(bad_sum), SchemaError);
    std::istringstream cycle("bn 1\nvar a 2\nvar b 2\nparents a b\nparents b a\n");
    CHECK_THROWS_AS(read_network(cycle), CycleError);
    std::istringstream good("bn 1\nvar a 2\nvar b 2\nparents a\nparents b a\n"
                            "cpt a 0 0.25 0.75\ncpt b 0 1 0\ncpt b 1 0.5 0.5\n");
    auto net = read_network(good);
    CHECK(net.structure().has_arc(0, 1));
    CHECK(net.cpt(1)(1, 0) == 0.5);
}

TEST_CASE("generated structures obey their construction ordering") {
    for (Seed seed = 0; seed < 200; ++seed) {
        auto g = generate_structure(make_variables(8, 2), 3, seed);
        REQUIRE(g.ordering.size() == 8);
        std::vector<std::size_t> pos(8);
        for (std::size_t p = 0; p < 8; ++p) pos[g.ordering[p]] = p;
        for (VarIndex i = 0; i < 8; ++i) {
            for (VarIndex p : g.structure.parents(i)) CHECK(pos[p] < pos[i]);
        }
        CHECK(g.structure == random_structure(8, 3, seed));
    }
}
