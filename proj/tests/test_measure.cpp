#include <carpetq/measure.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace carpetq;

namespace {

Pt pt(int xn, int xd, int yn, int yd) { return Pt{Rat(xn, xd), Rat(yn, yd)}; }

}  // namespace

TEST_CASE("similitudes map the center and corners as published") {
  CHECK(similitude_apply(1, pt(1, 2, 1, 2)) == pt(1, 6, 1, 6));
  CHECK(similitude_apply(2, pt(1, 2, 1, 2)) == pt(5, 6, 1, 6));
  CHECK(similitude_apply(4, pt(0, 1, 0, 1)) == pt(2, 3, 2, 3));
  CHECK_THROWS_AS(similitude_apply(0, pt(0, 1, 0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(similitude_apply(5, pt(0, 1, 0, 1)), std::invalid_argument);
}

TEST_CASE("word application composes with the first letter applied last") {
  CHECK(word_apply(Word{}, pt(1, 2, 1, 2)) == pt(1, 2, 1, 2));
  CHECK(word_apply(Word("12"), pt(1, 2, 1, 2)) == pt(5, 18, 1, 18));
  CHECK(word_apply(Word("44"), pt(1, 2, 1, 2)) == pt(17, 18, 17, 18));
}

TEST_CASE("word basics") {
  CHECK_THROWS_AS(Word("105"), std::invalid_argument);
  CHECK(Word("12").concat(Word("3")) == Word("123"));
  CHECK(Word("123").extends(Word("12")));
  CHECK(Word("123").extends(Word("123")));
  CHECK_FALSE(Word("12").extends(Word("123")));
  CHECK_FALSE(Word("21").extends(Word("12")));
  CHECK(Word{}.str() == "");
  CHECK(words_of_length(0).size() == 1);
  CHECK(words_of_length(3).size() == 64);
  CHECK(words_of_length(2).front() == Word("11"));
  CHECK(words_of_length(2).back() == Word("44"));
}

TEST_CASE("cylinder squares carry corner, side, centroid and weight") {
  auto root = cylinder(Word{});
  CHECK(root.lower_corner == pt(0, 1, 0, 1));
  CHECK(root.side == Rat(1));
  CHECK(root.centroid == pt(1, 2, 1, 2));
  CHECK(root.weight == Rat(1));

  auto j3 = cylinder(Word("3"));
  CHECK(j3.lower_corner == pt(0, 1, 2, 3));
  CHECK(j3.side == Rat(1, 3));
  CHECK(j3.centroid == pt(1, 6, 5, 6));
  CHECK(j3.weight == Rat(1, 4));

  auto j12 = cylinder(Word("12"));
  CHECK(j12.lower_corner == pt(2, 9, 0, 1));
  CHECK(j12.side == Rat(1, 9));
  CHECK(j12.centroid == word_apply(Word("12"), pt(1, 2, 1, 2)));
  CHECK(j12.weight == Rat(1, 16));
}

TEST_CASE("moments are the carpet mean and variance") {
  auto m = moments();
  CHECK(m.mean == pt(1, 2, 1, 2));
  CHECK(m.variance == Rat(1, 4));
  CHECK(m.variance == Rat(1, 8) + Rat(1, 8));
}

TEST_CASE("cylinder point distortion matches the closed form") {
  CHECK(cylinder_point_distortion(Word{}, pt(1, 2, 1, 2)) == Rat(1, 4));
  CHECK(cylinder_point_distortion(Word("1"), pt(1, 6, 1, 6)) == Rat(1, 144));
  CHECK(cylinder_point_distortion(Word("3"), pt(1, 2, 5, 6)) == Rat(5, 144));
}

TEST_CASE("atoms enumerate cylinder centroids lexicographically") {
  auto a0 = atoms(0);
  REQUIRE(a0.size() == 1);
  CHECK(a0[0].point == pt(1, 2, 1, 2));
  CHECK(a0[0].mass == Rat(1));

  auto a1 = atoms(1);
  REQUIRE(a1.size() == 4);
  CHECK(a1[0].point == pt(1, 6, 1, 6));
  CHECK(a1[1].point == pt(5, 6, 1, 6));
  CHECK(a1[2].point == pt(1, 6, 5, 6));
  CHECK(a1[3].point == pt(5, 6, 5, 6));
  for (const auto& a : a1) CHECK(a.mass == Rat(1, 4));

  auto a2 = atoms(2);
  REQUIRE(a2.size() == 16);
  CHECK(a2[0].point == pt(1, 18, 1, 18));
  Rat total(0);
  for (const auto& a : a2) total += a.mass;
  CHECK(total == Rat(1));

  CHECK_THROWS_AS(atoms(13), DepthLimitError);
  CHECK_THROWS_AS(atoms(5, 4), DepthLimitError);
}

TEST_CASE("atom order agrees with the word table") {
  auto words = words_of_length(3);
  auto pts = atoms(3);
  REQUIRE(words.size() == pts.size());
  for (std::size_t i = 0; i < words.size(); ++i)
    CHECK(pts[i].point == word_apply(words[i], pt(1, 2, 1, 2)));
}

TEST_CASE("child weights partition the parent weight") {
  // exhaustive at shallow depths, sampled deep words up to length 8
  for (unsigned k = 0; k <= 4; ++k) {
    for (const Word& w : words_of_length(k)) {
      Rat sum(0);
      for (int i = 1; i <= 4; ++i)
        sum += cylinder(w.appended(static_cast<std::uint8_t>(i))).weight;
      CHECK(sum == cylinder(w).weight);
    }
  }
  for (unsigned k : {6u, 8u}) {
    Word w;
    for (unsigned j = 0; j < k; ++j) w = w.appended(static_cast<std::uint8_t>(1 + (j * 3) % 4));
    Rat sum(0);
    for (int i = 1; i <= 4; ++i) sum += cylinder(w.appended(static_cast<std::uint8_t>(i))).weight;
    CHECK(sum == cylinder(w).weight);
  }
}

TEST_CASE("marginal atoms merge to the Cantor discretization") {
  auto m1 = marginal_atoms(1, Axis::X);
  REQUIRE(m1.size() == 2);
  CHECK(m1[0].value == Rat(1, 6));
  CHECK(m1[0].mass == Rat(1, 2));
  CHECK(m1[1].value == Rat(5, 6));

  auto m0 = marginal_atoms(0, Axis::Y);
  REQUIRE(m0.size() == 1);
  CHECK(m0[0].value == Rat(1, 2));
  CHECK(m0[0].mass == Rat(1));

  auto m2 = marginal_atoms(2, Axis::X);
  REQUIRE(m2.size() == 4);
  CHECK(m2[0].value == Rat(1, 18));
  CHECK(m2[1].value == Rat(5, 18));
  CHECK(m2[2].value == Rat(13, 18));
  CHECK(m2[3].value == Rat(17, 18));
  for (const auto& v : m2) CHECK(v.mass == Rat(1, 4));
}

TEST_CASE("both marginals equal the direct Cantor construction up to depth 6") {
  for (unsigned k = 0; k <= 6; ++k) {
    auto mx = marginal_atoms(k, Axis::X);
    auto my = marginal_atoms(k, Axis::Y);
    auto cantor = cantor_atoms(k);
    REQUIRE(mx.size() == cantor.size());
    REQUIRE(my.size() == cantor.size());
    for (std::size_t i = 0; i < cantor.size(); ++i) {
      CHECK(mx[i].value == cantor[i].value);
      CHECK(mx[i].mass == cantor[i].mass);
      CHECK(my[i].value == cantor[i].value);
      CHECK(my[i].mass == cantor[i].mass);
    }
  }
}

TEST_CASE("refinement identity: depth-K centroid sums reproduce the cylinder integral") {
  // sum over depth-K extensions tau of sigma of w(tau)*|c(tau)-a|^2
  //   = cylinder_point_distortion(sigma, a) - 4^-k * (1/4) * 9^-K
  auto check = [](const Word& sigma, unsigned K, const Pt& a) {
    unsigned k = static_cast<unsigned>(sigma.length());
    REQUIRE(K >= k);
    Rat sum(0);
    for (const Word& ext : words_of_length(K - k)) {
      Word tau = sigma.concat(ext);
      Rat w(1, pow_int(4, K));
      sum += w * sq_dist(word_apply(tau, Pt{Rat(1, 2), Rat(1, 2)}), a);
    }
    Rat expected = cylinder_point_distortion(sigma, a) -
                   Rat(1, pow_int(4, k)) * Rat(1, 4) * Rat(1, pow_int(9, K));
    CHECK(sum == expected);
  };

  std::vector<Pt> grid = {pt(0, 1, 0, 1), pt(1, 2, 1, 2), pt(1, 3, 7, 9), pt(1, 1, 1, 1)};
  for (const Pt& a : grid) {
    check(Word{}, 4, a);
    check(Word("2"), 5, a);
    check(Word("31"), 6, a);
    check(Word("123"), 7, a);
    check(Word("4412"), 8, a);
  }
}

TEST_CASE("square symmetries permute the atom set") {
  for (unsigned k : {1u, 3u}) {
    auto base = atoms(k);
    std::vector<Pt> sorted_base;
    for (const auto& a : base) sorted_base.push_back(a.point);
    std::sort(sorted_base.begin(), sorted_base.end());
    for (const auto& sym : square_symmetries()) {
      std::vector<Pt> mapped;
      for (const auto& a : base) mapped.push_back(sym.apply(a.point));
      std::sort(mapped.begin(), mapped.end());
      CHECK(mapped == sorted_base);
    }
  }
}

TEST_CASE("atoms CSV carries words and exact numerators") {
  std::ostringstream os;
  write_atoms_csv(os, 1);
  CHECK(os.str() ==
        "word,x_num,x_den,y_num,y_den,mass_num,mass_den\n"
        "1,1,6,1,6,1,4\n"
        "2,5,6,1,6,1,4\n"
        "3,1,6,5,6,1,4\n"
        "4,5,6,5,6,1,4\n");
}
