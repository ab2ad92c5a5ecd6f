#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "relmap/entity.hpp"
#include "relmap/errors.hpp"
#include "relmap/mapping_types.hpp"

using namespace relmap;

TEST(Entity, NormalizesCaseAndWhitespace) {
  const auto e = normalize_entity("  Solar\t  System ", DomainTag::Base);
  EXPECT_EQ(e.name(), "solar system");
  EXPECT_EQ(e.domain(), DomainTag::Base);
  ASSERT_FALSE(e.surface_forms().empty());
  EXPECT_EQ(e.surface_forms().front(), "solar system");
}

TEST(Entity, SurfaceFormsIncludeNaivePluralAndSingular) {
  const auto earth = normalize_entity("earth");
  EXPECT_NE(std::find(earth.surface_forms().begin(), earth.surface_forms().end(), "earths"),
            earth.surface_forms().end());
  const auto electrons = normalize_entity("electrons");
  EXPECT_NE(std::find(electrons.surface_forms().begin(), electrons.surface_forms().end(), "electron"),
            electrons.surface_forms().end());
}

TEST(Entity, EmptyNameIsRejected) {
  EXPECT_THROW(normalize_entity(""), InvalidEntityError);
  EXPECT_THROW(normalize_entity(" \t\n"), InvalidEntityError);
}

TEST(Entity, NormalizationIsIdempotent) {
  std::mt19937 rng(7);
  const std::string alphabet = "aBc DeF\tgh  Xyz";
  for (int n = 0; n < 500; ++n) {
    std::string raw;
    const int len = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) raw += alphabet[rng() % alphabet.size()];
    if (normalize_text(raw).empty()) continue;
    const auto once = normalize_entity(raw).name();
    EXPECT_EQ(normalize_entity(once).name(), once) << "raw='" << raw << "'";
  }
}

TEST(Entity, DomainRejectsDuplicatesAfterNormalization) {
  EXPECT_THROW(make_domain({"Sun", "sun "}, DomainTag::Base), InputError);
  const auto d = make_domain({"Sun", "Earth"}, DomainTag::Target);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[1].domain(), DomainTag::Target);
}

TEST(RelationPhrase, TrimsAndRejectsEmpty) {
  const auto p = make_phrase("  Revolve   Around ", "openie");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->text, "revolve around");
  EXPECT_FALSE(make_phrase("   ", "openie"));
}

TEST(RelationSet, DedupesSortsAndKeepsDirection) {
  const auto earth = normalize_entity("earth");
  const auto sun = normalize_entity("sun");
  RelationSet fwd(earth, sun, {{"orbit", "a", {}}, {"far from", "b", {}}, {"orbit", "b", {}}});
  ASSERT_EQ(fwd.size(), 2u);
  EXPECT_EQ(fwd.relations()[0].text, "far from");
  EXPECT_EQ(fwd.relations()[1].text, "orbit");
  RelationSet bwd(sun, earth, {{"orbit", "a", {}}});
  EXPECT_NE(fwd, bwd);
  EXPECT_EQ(bwd.head().name(), "sun");
  EXPECT_THROW(RelationSet(earth, earth), InputError);
}

TEST(Mapping, EnforcesInjectivityAndNoSizeOne) {
  const std::vector<std::string> b{"a", "b", "c"};
  const std::vector<std::string> t{"x", "y", "z"};
  EXPECT_THROW(Mapping({{"a", "x"}}, b, t, 0.0), InputError);
  EXPECT_THROW(Mapping({{"a", "x"}, {"b", "x"}}, b, t, 0.0), InputError);
  EXPECT_THROW(Mapping({{"a", "x"}, {"a", "y"}}, b, t, 0.0), InputError);
  EXPECT_THROW(Mapping({{"a", "x"}, {"q", "y"}}, b, t, 0.0), InputError);
  EXPECT_THROW(Mapping({{"a", "x"}, {"b", "y"}}, b, t, -1.0), InputError);

  const Mapping m({{"b", "y"}, {"a", "x"}}, b, t, 2.0);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.pairs().front().base, "a");
  EXPECT_EQ(m.unmapped_base(), std::vector<std::string>{"c"});
  EXPECT_EQ(m.unmapped_target(), std::vector<std::string>{"z"});
  ASSERT_NE(m.image("b"), nullptr);
  EXPECT_EQ(*m.image("b"), "y");
  EXPECT_EQ(m.image("c"), nullptr);

  const Mapping empty({}, b, t, 0.0);
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(empty.unmapped_base().size(), 3u);
}
