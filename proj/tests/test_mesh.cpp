#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "pifem/errors.hpp"
#include "pifem/mesh.hpp"

using namespace pifem;

namespace {

// Independent interior-edge oracle: count element incidences per node pair.
std::set<std::pair<int, int>> interior_edges_by_scan(const Mesh& mesh) {
    std::map<std::pair<int, int>, int> incidence;
    for (const auto& tri : mesh.elements) {
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            ++incidence[{a, b}];
        }
    }
    std::set<std::pair<int, int>> interior;
    for (const auto& [edge, count] : incidence)
        if (count == 2) interior.insert(edge);
    return interior;
}

}  // namespace

TEST_CASE("uniform mesh entity counts") {
    const Mesh mesh = build_uniform_mesh(2);
    CHECK(mesh.node_count() == 9);
    CHECK(mesh.element_count() == 8);
    CHECK(mesh.edge_count() == 16);

    const Mesh mesh10 = build_uniform_mesh(10);
    CHECK(mesh10.node_count() == 121);
    CHECK(mesh10.element_count() == 200);
}

TEST_CASE("element areas and mesh size") {
    const Mesh mesh = build_uniform_mesh(2);
    for (int e = 0; e < mesh.element_count(); ++e)
        CHECK(mesh.element_area(e) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mesh.h == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    const Mesh mesh5 = build_uniform_mesh(5);
    double total = 0.0;
    for (int e = 0; e < mesh5.element_count(); ++e) {
        CHECK(mesh5.element_area(e) == doctest::Approx(2.0 / 25.0).epsilon(1e-13));
        total += mesh5.element_area(e);
    }
    CHECK(total == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("interior edges match the incidence-scan oracle") {
    for (int N : {2, 5, 8}) {
        const Mesh mesh = build_uniform_mesh(N);
        const auto oracle = interior_edges_by_scan(mesh);

        const std::vector<int> interior = interior_edges(mesh);
        CHECK(interior.size() == oracle.size());
        int boundary = 0;
        for (int e = 0; e < mesh.edge_count(); ++e) boundary += mesh.is_boundary_edge(e) ? 1 : 0;
        CHECK(static_cast<int>(interior.size()) + boundary == mesh.edge_count());

        for (int e : interior) {
            CHECK(oracle.count({mesh.edges[e][0], mesh.edges[e][1]}) == 1);
            CHECK(!mesh.is_boundary_edge(e));
        }
    }
    // frozen oracle value for the 2x2 mesh: 4 diagonals + 2 vertical + 2
    // horizontal shared edges
    CHECK(interior_edges(build_uniform_mesh(2)).size() == 8);
}

TEST_CASE("edge/element incidence is symmetric") {
    const Mesh mesh = build_uniform_mesh(4);
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (int k = 0; k < 3; ++k) {
            const int edge = mesh.element_edges[e][k];
            const auto& adj = mesh.edge_elements[edge];
            CHECK((adj[0] == e || adj[1] == e));
        }
    }
    for (int edge = 0; edge < mesh.edge_count(); ++edge) {
        for (int side = 0; side < 2; ++side) {
            const int e = mesh.edge_elements[edge][side];
            if (e < 0) continue;
            const auto& owned = mesh.element_edges[e];
            CHECK(std::count(owned.begin(), owned.end(), edge) == 1);
        }
    }
}

TEST_CASE("orientation, boundary flags, dof map") {
    const Mesh mesh = build_uniform_mesh(3);
    for (int e = 0; e < mesh.element_count(); ++e) CHECK(mesh.element_area(e) > 0.0);

    int boundary_nodes = 0;
    for (int n = 0; n < mesh.node_count(); ++n) {
        const Vec2 p = mesh.nodes[n];
        const bool on_boundary = std::abs(std::abs(p.x) - 1.0) < 1e-14 ||
                                 std::abs(std::abs(p.y) - 1.0) < 1e-14;
        CHECK(mesh.boundary_node[n] == on_boundary);
        boundary_nodes += on_boundary ? 1 : 0;
        if (on_boundary)
            CHECK(mesh.node_dof[n] == -1);
        else
            CHECK(mesh.dof_node[mesh.node_dof[n]] == n);
    }
    CHECK(mesh.dof_count == mesh.node_count() - boundary_nodes);
    CHECK(mesh.dof_count == 4);   // (N-1)^2
}

TEST_CASE("rejects invalid partition parameter") {
    CHECK_THROWS_AS(build_uniform_mesh(1), InvalidArgument);
    CHECK_THROWS_AS(build_uniform_mesh(0), InvalidArgument);
}

TEST_CASE("mesh dump is one entity per line") {
    const Mesh mesh = build_uniform_mesh(2);
    std::ostringstream os;
    dump(mesh, os);
    int lines = 0;
    std::istringstream is(os.str());
    std::string line;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == mesh.node_count() + mesh.element_count() + mesh.edge_count());
}
