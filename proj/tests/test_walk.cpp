#include <doctest.h>

#include <vector>

#include "ltlab/local_time.hpp"
#include "ltlab/path_sim.hpp"

using ltlab::localtime::walk_hamiltonian;
using ltlab::localtime::walk_local_time;
using ltlab::pathsim::WalkPath;

namespace {

WalkPath make_walk(std::vector<long long> positions) {
  WalkPath w;
  w.positions = std::move(positions);
  return w;
}

// Enumerate every +-1 step sequence of the given length.
template <typename Fn>
void for_each_walk(int steps, Fn&& fn) {
  for (unsigned mask = 0; mask < (1u << steps); ++mask) {
    std::vector<long long> pos(steps + 1, 0);
    for (int i = 0; i < steps; ++i)
      pos[i + 1] = pos[i] + ((mask >> i) & 1u ? 1 : -1);
    fn(make_walk(std::move(pos)));
  }
}

}  // namespace

TEST_CASE("walk local time counts visits from i = 1") {
  const auto empty = make_walk({0});
  const auto lt0 = walk_local_time(empty);
  CHECK(lt0.total() == 0);

  const auto w = make_walk({0, 1, 0});
  const auto lt = walk_local_time(w);
  CHECK(lt.at(0) == 1);
  CHECK(lt.at(1) == 1);
  CHECK(lt.at(-1) == 0);
  CHECK(lt.total() == 2);
}

TEST_CASE("hamiltonian of [0,1,0], both routes") {
  const auto h = walk_hamiltonian(make_walk({0, 1, 0}));
  // sum_x (l^x - l^{x+1})^2 = 1 + 0 + 1.
  CHECK(h.square_sum == 2);
  // pair form: no coincidences, one adjacent ordered pair each way.
  CHECK(h.pair_count == -1);
  CHECK(h.from_square == h.pair_count);
}

TEST_CASE("hamiltonian: empty walk") {
  const auto h = walk_hamiltonian(make_walk({0}));
  CHECK(h.square_sum == 0);
  CHECK(h.pair_count == 0);
  CHECK(h.from_square == 0);
  CHECK(h.local_time.total() == 0);
}

TEST_CASE("exhaustive reconciliation of the two hamiltonian routes") {
  // The bare square sum satisfies pair_count = square_sum/2 - n (ordered
  // pairs counted twice, n self-pairs); exhaustively checked up to length 8.
  for (int steps = 0; steps <= 8; ++steps) {
    for_each_walk(steps, [&](const WalkPath& w) {
      const auto h = walk_hamiltonian(w);
      REQUIRE(h.square_sum % 2 == 0);
      REQUIRE(h.pair_count == h.from_square);
      REQUIRE(h.local_time.total() == static_cast<long long>(steps));
    });
  }
}

TEST_CASE("hamiltonian routes agree on random longer walks") {
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    const auto w = ltlab::pathsim::generate_walk(400, seed);
    const auto h = walk_hamiltonian(w);
    CHECK(h.pair_count == h.from_square);
  }
}
