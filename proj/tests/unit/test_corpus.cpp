#include <gtest/gtest.h>

#include <set>

#include "cefr/catalog.hpp"
#include "cefr/construct_kinds.hpp"
#include "corpus.hpp"

namespace {

using cefr::testing::load_labeled_corpus;

TEST(Corpus, HasEnoughSnippets) { EXPECT_GE(load_labeled_corpus(CEFR_CORPUS_DIR).size(), 20u); }

TEST(Corpus, LabelsCoverEveryCatalogKind) {
  std::set<std::string> labeled;
  for (const auto& snippet : load_labeled_corpus(CEFR_CORPUS_DIR)) {
    for (const auto& [key, count] : snippet.expected) labeled.insert(key.first);
  }
  for (const auto& rule : cefr::default_catalog().rules()) {
    EXPECT_TRUE(labeled.contains(rule.kind)) << "no snippet labels " << rule.kind;
  }
  for (auto kind : cefr::kinds::kAll) EXPECT_TRUE(labeled.contains(std::string(kind))) << kind;
}

TEST(Corpus, OccurrencesMatchLabels) {
  for (const auto& snippet : load_labeled_corpus(CEFR_CORPUS_DIR)) {
    const auto problems = cefr::testing::corpus_discrepancies(snippet);
    for (const auto& problem : problems) ADD_FAILURE() << problem;
  }
}

TEST(Corpus, LabelsUseKnownKinds) {
  for (const auto& snippet : load_labeled_corpus(CEFR_CORPUS_DIR)) {
    for (const auto& [key, count] : snippet.expected) {
      EXPECT_TRUE(cefr::default_catalog().classify(key.first)) << snippet.path << " " << key.first;
    }
  }
}

}  // namespace
