#include "doctest.h"

#include <chrono>
#include <iostream>

#include "ainfty/bar.hpp"
#include "cup1_fixture.hpp"

using namespace ainfty;

namespace {

const BarConstruction& bar() {
  static const BarConstruction ba(cup1_dga(), 12);
  return ba;
}

// μ straight from its definition: iterate the reduced coproduct ψ̄ of
// BA⊗BA on the first factor and apply ↓φ to every factor.
using Factor = BarPair;
using Chain = std::vector<Factor>;

std::vector<Chain> reduced_psi_first(const Chain& c) {
  std::vector<Chain> out;
  const auto& [u, v] = c.front();
  for (std::size_t i = 0; i <= u.size(); ++i) {
    for (std::size_t j = 0; j <= v.size(); ++j) {
      Factor left{BarWord(u.begin(), u.begin() + i), BarWord(v.begin(), v.begin() + j)};
      Factor right{BarWord(u.begin() + i, u.end()), BarWord(v.begin() + j, v.end())};
      bool left_unit = left.first.empty() && left.second.empty();
      bool right_unit = right.first.empty() && right.second.empty();
      if (left_unit || right_unit) continue;
      Chain next{left, right};
      next.insert(next.end(), c.begin() + 1, c.end());
      out.push_back(std::move(next));
    }
  }
  return out;
}

BarElement literal_mu(const BarConstruction& ba, const BarWord& u, const BarWord& v) {
  if (u.empty() && v.empty()) return {BarWord{}};
  BarElement out;
  std::vector<Chain> level{{{u, v}}};
  for (std::size_t k = 0; k <= u.size() + v.size() && !level.empty(); ++k) {
    for (const Chain& c : level) {
      std::vector<BarElement> partial{{BarWord{}}};
      BarElement words{BarWord{}};
      for (const Factor& f : c) {
        Z2Combo value = ba.phi(f.first, f.second);
        BarElement next;
        for (const auto& w : words) {
          for (std::size_t x : value) {
            BarWord y = w;
            y.push_back(x);
            toggle(next, y);
          }
        }
        words = std::move(next);
      }
      out = out + words;
    }
    std::vector<Chain> deeper;
    for (const Chain& c : level) {
      for (auto& d : reduced_psi_first(c)) deeper.push_back(std::move(d));
    }
    level = std::move(deeper);
  }
  return out;
}

template <class F>
double seconds(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("truncated algebra validates") {
  CHECK(cup1_dga().validate().empty());
  TruncatedDga bad(4);
  bad.add_element("e", 1);
  CHECK_FALSE(bad.validate().empty());
}

TEST_CASE("bar differential, coproduct and phi examples") {
  const BarConstruction& ba = bar();
  CHECK(ba.degree(ba.parse_word("[a2|a3]")) == 3);
  CHECK(ba.diff(ba.parse("[b]")).empty());
  CHECK(ba.diff(ba.parse("[a2|a3]")) == ba.parse("[a2a3]"));
  CHECK(ba.diff(ba.parse("[b|b]")).empty());
  CHECK(ba.format(ba.coproduct(ba.parse_word("[b]"))) == "[ ]⊗[b] + [b]⊗[ ]");
  CHECK(ba.coproduct(BarWord{}) == BarTensor{{BarWord{}, BarWord{}}});
  BarWord a2 = ba.parse_word("[a2]"), a3 = ba.parse_word("[a3]"), b = ba.parse_word("[b]");
  BarTensor expect{{{}, ba.parse_word("[a2|a3]")}, {a2, a3}, {ba.parse_word("[a2|a3]"), {}}};
  CHECK(ba.coproduct(ba.parse_word("[a2|a3]")) == expect);
  CHECK(ba.algebra().format(ba.phi(a2, {})) == "a2");
  CHECK(ba.algebra().format(ba.phi({}, a3)) == "a3");
  CHECK(ba.algebra().format(ba.phi(b, b)) == "a2a3");
  CHECK(ba.phi(a2, a3).empty());
  CHECK(ba.format(ba.parse("[a3|a2] + [a2|a3] + [a3|a2]")) == "[a2|a3]");
  CHECK_THROWS(ba.parse_word("[a2|zz]"));
}

TEST_CASE("Baues multiplication examples") {
  const BarConstruction& ba = bar();
  BarWord b = ba.parse_word("[b]");
  CHECK(ba.mu(b, b) == ba.parse("[a2a3]"));
  CHECK(ba.mu(ba.parse_word("[a2]"), ba.parse_word("[a3]")) == ba.parse("[a2|a3] + [a3|a2]"));
  CHECK(ba.mu({}, b) == BarElement{b});
  CHECK(ba.mu(b, {}) == BarElement{b});
}

TEST_CASE("recursive mu matches the literal psi-bar iteration") {
  const BarConstruction& ba = bar();
  auto all = ba.words_up_to(7);
  int compared = 0;
  for (const auto& u : all) {
    for (const auto& v : all) {
      if (ba.degree(u) + ba.degree(v) > 7) continue;
      CHECK(ba.mu(u, v) == literal_mu(ba, u, v));
      ++compared;
    }
  }
  CHECK(compared > 900);
}

TEST_CASE("DG Hopf identities through degree 12") {
  const BarConstruction& ba = bar();
  const int bound = 12;
  std::vector<std::pair<const char*, std::vector<std::string>>> results;
  double t = seconds([&] {
    results.push_back({"d^2", ba.check_d_squared(bound)});
    results.push_back({"coassociative", ba.check_coassociative(bound)});
    results.push_back({"counit", ba.check_counit(bound)});
    results.push_back({"coproduct chain map", ba.check_coproduct_chain_map(bound)});
    results.push_back({"unit", ba.check_mu_unit(bound)});
    results.push_back({"mu chain map", ba.check_mu_chain_map(bound)});
    results.push_back({"hopf", ba.check_hopf(bound)});
    results.push_back({"associative", ba.check_mu_associative(bound)});
    results.push_back({"primitive letters", ba.check_letters_primitive()});
  });
  for (const auto& [name, violations] : results) {
    CAPTURE(name);
    CHECK(violations.empty());
    if (!violations.empty()) MESSAGE(violations.front());
  }
  MESSAGE("bar checks took " << t << "s");
}

TEST_CASE("bar complex and maps agree with the word-level operations") {
  const BarConstruction& ba = bar();
  auto space = std::make_shared<Space>(BarConstruction(cup1_dga(), 6).complex());
  const Complex& c = space->base();
  CHECK(c.check_d_squared().empty());
  CHECK(c.homology(1).group().invariant_factors() == std::vector<Int>{2});
  CHECK(c.homology(2).group().invariant_factors() == std::vector<Int>{2, 2, 2});
  MultiMap mu = ba.mu_map(space);
  MultiMap delta = ba.coproduct_map(space);
  const TensorPower& p2 = space->power(2);
  for (int k = 0; k <= 6; ++k) {
    for (std::size_t i = 0; i < p2.basis(k).size(); ++i) {
      const auto& t = p2.basis(k)[i];
      BarElement direct = ba.mu(ba.words(t[0].degree)[t[0].generator], ba.words(t[1].degree)[t[1].generator]);
      CHECK(ba.from_vector(k, mu.value(t)) == direct);
    }
  }
  // Δ is a chain map at the Complex level too
  MultiMap d1 = MultiMap::differential(space, 1);
  MultiMap d2 = MultiMap::differential(space, 2);
  CHECK(compose(delta, d1).equal_interior(compose(d2, delta)));
}
