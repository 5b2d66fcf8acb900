#include <gtest/gtest.h>

#include <sstream>

#include "graphheat/io.hpp"
#include "support.hpp"

using namespace graphheat;

namespace {

template <class Write, class Read>
auto round_trip(Write w, Read r) {
  std::stringstream s;
  w(s);
  return r(s);
}

std::istringstream text(const std::string& s) { return std::istringstream(s); }

}  // namespace

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = nd(rng);
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

TEST(EdgeList, RoundTripKeepsIsolatedNodes) {
  std::mt19937_64 rng(2);
  for (int c = 0; c < 10; ++c) {
    const auto g = gh_test::random_graph(25, rng, 0.15);
    const auto back = round_trip([&](std::ostream& o) { io::write_edge_list(o, g); }, [](std::istream& i) { return io::read_graph(i); });
    EXPECT_EQ(back.n_nodes, g.n_nodes);
    EXPECT_EQ(back.adjacency.to_dense(), g.adjacency.to_dense());
  }
}

TEST(EdgeList, CommentsBlankLinesAndTabs) {
  auto in = text("# triangle\n0 1 1\n\n1\t2   2.5\r\n# trailing\n0 2 +3e0\n");
  const auto g = io::read_graph(in);
  EXPECT_EQ(g.n_nodes, 3u);
  EXPECT_EQ(g.adjacency.at(1, 2), 2.5);
  EXPECT_EQ(g.adjacency.at(0, 2), 3.0);
}

TEST(EdgeList, Errors) {
  auto two = text("0 1\n");
  EXPECT_THROW(io::parse_edge_list(two), InputError);
  auto word = text("0 x 1\n");
  EXPECT_THROW(io::parse_edge_list(word), InputError);
  auto neg = text("-1 2 1\n");
  EXPECT_THROW(io::parse_edge_list(neg), InputError);
  auto small = text("# nodes 2\n0 4 1\n");
  EXPECT_THROW(io::parse_edge_list(small), InputError);
  auto empty = text("# nothing\n");
  EXPECT_THROW(io::read_graph(empty), InputError);
  auto loop = text("1 1 1\n");
  EXPECT_THROW(io::read_graph(loop), InputError);
}

TEST(EdgeList, ErrorMessageNamesLine) {
  auto in = text("0 1 1\n1 2 oops\n");
  try {
    io::parse_edge_list(in);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(VoxelMask, RunLengthRoundTrip) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.3);
  for (int c = 0; c < 10; ++c) {
    VoxelMask m({7, 5, 3}, {1.0, 0.25, 3.5});
    for (auto& v : m.occupancy) v = coin(rng) ? 1 : 0;
    const auto back =
        round_trip([&](std::ostream& o) { io::write_voxel_mask(o, m); }, [](std::istream& i) { return io::parse_voxel_mask(i); });
    EXPECT_EQ(back, m);
  }
  VoxelMask full({2, 2, 2});
  std::fill(full.occupancy.begin(), full.occupancy.end(), std::uint8_t{1});
  std::stringstream s;
  io::write_voxel_mask(s, full);
  EXPECT_EQ(s.str(), "voxmask 2 2 2 1 1 1\n0 8\n");
  EXPECT_EQ(io::parse_voxel_mask(s), full);
}

TEST(VoxelMask, CoordinateList) {
  auto in = text("# x y z\n0 0 0\n2 1 0\n");
  const auto m = io::parse_voxel_mask(in);
  EXPECT_EQ(m.shape, (std::array<std::size_t, 3>{3, 2, 1}));
  EXPECT_EQ(m.count(), 2u);
  EXPECT_TRUE(m.at(2, 1, 0));
}

TEST(VoxelMask, Errors) {
  auto short_runs = text("voxmask 2 2 1 1 1 1\n1 2\n");
  EXPECT_THROW(io::parse_voxel_mask(short_runs), InputError);
  auto long_runs = text("voxmask 2 2 1 1 1 1\n1 9\n");
  EXPECT_THROW(io::parse_voxel_mask(long_runs), InputError);
  auto bad_header = text("voxmask 2 2\n");
  EXPECT_THROW(io::parse_voxel_mask(bad_header), InputError);
  auto zero_spacing = text("voxmask 1 1 1 0 1 1\n1\n");
  EXPECT_THROW(io::parse_voxel_mask(zero_spacing), InputError);
  auto empty = text("");
  EXPECT_THROW(io::parse_voxel_mask(empty), InputError);
  auto two = text("1 2\n");
  EXPECT_THROW(io::parse_voxel_mask(two), InputError);
}

TEST(Signal, RoundTripAndAnyOrder) {
  std::mt19937_64 rng(4);
  const Vector f = gh_test::random_vector(50, rng);
  const auto back = round_trip([&](std::ostream& o) { io::write_signal(o, f); }, [](std::istream& i) { return io::parse_signal(i); });
  EXPECT_EQ(back, f);
  auto shuffled = text("node,value\n2,3\n0,1\n1,2\n");
  Vector want(3);
  want << 1, 2, 3;
  EXPECT_EQ(io::parse_signal(shuffled), want);
}

TEST(Signal, Errors) {
  auto header = text("id,value\n0,1\n");
  EXPECT_THROW(io::parse_signal(header), InputError);
  auto gap = text("node,value\n0,1\n2,1\n");
  EXPECT_THROW(io::parse_signal(gap), InputError);
  auto dup = text("node,value\n0,1\n0,2\n");
  EXPECT_THROW(io::parse_signal(dup), InputError);
  auto empty = text("");
  EXPECT_THROW(io::parse_signal(empty), InputError);
  auto nonnum = text("node,value\n0,abc\n");
  EXPECT_THROW(io::parse_signal(nonnum), InputError);
}

TEST(Coordinate, RoundTrip) {
  std::mt19937_64 rng(5);
  const auto l = build_laplacian(gh_test::random_connected_graph(20, rng)).l;
  const auto back = round_trip([&](std::ostream& o) { io::write_coordinate(o, l); }, [](std::istream& i) { return io::parse_coordinate(i); });
  EXPECT_EQ(back.to_dense(), l.to_dense());
}

TEST(Coordinate, Errors) {
  auto missing = text("0 0 1\n");
  EXPECT_THROW(io::parse_coordinate(missing), InputError);
  auto count = text("# coordinate 2 3\n0 0 1\n");
  EXPECT_THROW(io::parse_coordinate(count), InputError);
  auto asym = text("# coordinate 2 2\n0 1 1\n1 0 2\n");
  EXPECT_THROW(io::parse_coordinate(asym), InputError);
}

TEST(EdgeField, RoundTrip) {
  const std::vector<EdgeValue> f{{0, 1, 0.5}, {1, 2, -1.0 / 3.0}};
  const auto back = round_trip([&](std::ostream& o) { io::write_edge_field(o, f); }, [](std::istream& i) { return io::parse_edge_field(i); });
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].j, 2u);
  EXPECT_EQ(back[1].value, -1.0 / 3.0);
}

TEST(Table, RoundTripAndHeaderCheck) {
  const std::vector<std::string> h{"x", "y", "z"};
  std::mt19937_64 rng(6);
  const DenseMatrix m = gh_test::random_matrix(4, 3, rng);
  const auto back = round_trip([&](std::ostream& o) { io::write_table(o, h, m); }, [&](std::istream& i) { return io::parse_table(i, h); });
  EXPECT_EQ(back, m);
  auto wrong = text("x,y\n1,2\n");
  EXPECT_THROW(io::parse_table(wrong, h), InputError);
  auto ragged = text("x,y,z\n1,2\n");
  EXPECT_THROW(io::parse_table(ragged, h), InputError);
}
