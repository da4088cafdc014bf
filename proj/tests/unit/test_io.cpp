#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "clams/ambiguity.hpp"
#include "clams/errors.hpp"
#include "clams/io.hpp"
#include "clams/serialize.hpp"
#include "support/fixtures.hpp"

namespace clams {
namespace {

using testing::TempDir;

class Files : public ::testing::Test {
 protected:
  std::filesystem::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name, std::ios::binary) << text;
    return dir_ / name;
  }
  std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  ErrorCode code_of(auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      message_ = e.what();
      return e.code();
    }
    ADD_FAILURE() << "no clams::Error thrown";
    return ErrorCode::InvalidArgument;
  }
  TempDir dir_{"io"};
  std::string message_;
};

TEST(SplitCsv, TrimsFieldsAndKeepsEmptyOnes) {
  EXPECT_EQ(split_csv(" a, b ,c\r"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(split_csv("1,,2"), (std::vector<std::string>{"1", "", "2"}));
  EXPECT_EQ(split_csv(""), (std::vector<std::string>{""}));
}

TEST(Round12, Examples) {
  EXPECT_EQ(round12(0.1 + 0.2), 0.3);
  EXPECT_EQ(round12(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(round12(0.0), 0.0);
  EXPECT_TRUE(std::isinf(round12(std::numeric_limits<double>::infinity())));
  EXPECT_EQ(format12(2.5), "2.5");
  EXPECT_EQ(format12(1e-20), "1e-20");
  EXPECT_EQ(format12(round12(1.0 / 3.0)), "0.333333333333");
}

TEST_F(Files, ScatterplotCsvRoundTrip) {
  const Scatterplot p = validate_scatterplot({{0.5, -1}, {1e-3, 2.25}, {3, 4}}, "x");
  write_scatterplot_csv(p, dir_ / "pts.csv");
  EXPECT_EQ(slurp(dir_ / "pts.csv"), "x,y\n0.5,-1\n0.001,2.25\n3,4\n");
  const Scatterplot q = read_scatterplot(dir_ / "pts.csv");
  EXPECT_EQ(q.points(), p.points());
  EXPECT_EQ(q.id(), "pts");
}

TEST_F(Files, ScatterplotCsvAcceptsCrlfBomAndBlankLines) {
  write("a.csv", "\xEF\xBB\xBFx,y\r\n1,2\r\n\r\n+3,-4e1\r\n");
  EXPECT_EQ(read_scatterplot(dir_ / "a.csv").points(), (std::vector<Point>{{1, 2}, {3, -40}}));
}

TEST_F(Files, ScatterplotCsvErrorsNameTheLine) {
  write("bad.csv", "x,y\n1,2\n3,oops\n");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "bad.csv"); }), ErrorCode::ParseError);
  EXPECT_NE(message_.find("bad.csv:3"), std::string::npos) << message_;
  write("bad.csv", "x,y\n1,2,3\n");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "bad.csv"); }), ErrorCode::ParseError);
  EXPECT_NE(message_.find(":2"), std::string::npos) << message_;
  write("bad.csv", "a,b\n1,2\n");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "bad.csv"); }), ErrorCode::ParseError);
  write("bad.csv", "x,y\n1,nan\n");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "bad.csv"); }), ErrorCode::ParseError);
  write("empty.csv", "x,y\n");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "empty.csv"); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "missing.csv"); }), ErrorCode::IoError);
}

TEST_F(Files, ScatterplotJson) {
  write("p.json", R"({"id": "demo", "points": [[1, 2], [3.5, -1]]})");
  const Scatterplot p = read_scatterplot(dir_ / "p.json");
  EXPECT_EQ(p.id(), "demo");
  EXPECT_EQ(p.points(), (std::vector<Point>{{1, 2}, {3.5, -1}}));
  write("q.json", R"({"points": [[0, 0], [1, 1]]})");
  EXPECT_EQ(read_scatterplot(dir_ / "q.json").id(), "q");
  write("r.json", R"({"points": [[0, 0, 1]]})");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "r.json"); }), ErrorCode::ParseError);
  write("s.json", R"({"points": [[0, "a"]]})");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "s.json"); }), ErrorCode::ParseError);
  write("t.json", "{");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "t.json"); }), ErrorCode::ParseError);
  write("u.json", R"({"pts": []})");
  EXPECT_EQ(code_of([&] { read_scatterplot(dir_ / "u.json"); }), ErrorCode::ParseError);
}

TEST_F(Files, ClusteringRoundTripAndNoise) {
  const Clustering c({0, 2, -1, 1, 0});
  write_clustering_csv(c, dir_ / "c.csv");
  EXPECT_EQ(read_clustering_csv(dir_ / "c.csv").labels(), c.labels());
  write("c.csv", "label\n0\n-2\n");
  EXPECT_EQ(code_of([&] { read_clustering_csv(dir_ / "c.csv"); }), ErrorCode::ParseError);
  write("c.csv", "label\n0\n1.5\n");
  EXPECT_EQ(code_of([&] { read_clustering_csv(dir_ / "c.csv"); }), ErrorCode::ParseError);
}

TEST_F(Files, TrainingRoundTrip) {
  TrainingSet t;
  for (int i = 0; i < 5; ++i) {
    LabeledPair r;
    r.features.dc = i * 0.5;
    r.features.dsr = 1.0 + i;
    r.features.dd = 0.125;
    r.features.sd = 2.0;
    r.features.ed = 0.0;
    r.features.ac = 0.25 * i;
    r.label = i / 4.0;
    t.rows.push_back(r);
  }
  write_training_csv(t, dir_ / "t.csv");
  const TrainingSet u = read_training_csv(dir_ / "t.csv");
  EXPECT_EQ(u.provenance, Provenance::External);
  ASSERT_EQ(u.rows.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(u.rows[i].label, t.rows[i].label);
    EXPECT_EQ(u.rows[i].features.dc, t.rows[i].features.dc);
    EXPECT_EQ(u.rows[i].features.ac, t.rows[i].features.ac);
  }
  write("t.csv", "dc,dsr,dd,sd,ed,ac,label\n0,1,0,0,0,0,0.5\n0,1,0,0,0,0,1.5\n");
  EXPECT_EQ(code_of([&] { read_training_csv(dir_ / "t.csv"); }), ErrorCode::RangeError);
  EXPECT_NE(message_.find(":3"), std::string::npos) << message_;
}

TEST_F(Files, NumericTable) {
  write("n.csv", "a,b,c\n1,2,3\n4,5,6\n");
  EXPECT_EQ(read_numeric_csv(dir_ / "n.csv"), (std::vector<std::vector<double>>{{1, 2, 3}, {4, 5, 6}}));
  write("n.csv", "1,2\n3,4\n");
  EXPECT_EQ(read_numeric_csv(dir_ / "n.csv").size(), 2u);
  write("n.csv", "1,2\n3\n");
  EXPECT_EQ(code_of([&] { read_numeric_csv(dir_ / "n.csv"); }), ErrorCode::ParseError);
  write("n.csv", "1,2\nx,y\n");
  EXPECT_EQ(code_of([&] { read_numeric_csv(dir_ / "n.csv"); }), ErrorCode::ParseError);
  write("n.csv", "a,b\n");
  EXPECT_EQ(code_of([&] { read_numeric_csv(dir_ / "n.csv"); }), ErrorCode::EmptyInput);
}

TEST(JsonNumber, SpecialValues) {
  EXPECT_EQ(json_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(json_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(json_number(std::nan("")).is_null());
  EXPECT_EQ(json_number(0.1 + 0.2).get<double>(), 0.3);
}

AmbiguityReport two_component_report() {
  TreeEnsemble e;
  e.base_score = 0.25;
  const SeparabilityModel model(e, FeatureMask::standard(), {});
  Decomposition d;
  d.k_opt = 2;
  d.components.push_back(GaussianComponent::from_axes({0, 0}, 2, 1, 0.3, 50, 0.5));
  d.components.push_back(GaussianComponent::from_axes({5, 1}, 1, 1, 0, 50, 0.5));
  d.bic_curve = {{1, 10.0}, {2, 5.0}};
  return score_decomposition(d, model);
}

TEST(ReportJson, Fields) {
  TreeEnsemble e;
  e.base_score = 0.25;
  const SeparabilityModel model(e, FeatureMask::standard(), {});
  const AmbiguityReport r = two_component_report();
  const nlohmann::json j = report_json("demo", r, model, GmmFitConfig{});
  EXPECT_EQ(j["format_version"], kReportFormatVersion);
  EXPECT_EQ(j["id"], "demo");
  EXPECT_EQ(j["score"].get<double>(), round12(entropy_ambiguity(0.25)));
  ASSERT_EQ(j["pairs"].size(), 1u);
  EXPECT_EQ(j["pairs"][0]["pair"], nlohmann::json::array({0, 1}));
  EXPECT_EQ(j["pairs"][0]["separability"].get<double>(), 0.25);
  EXPECT_EQ(j["decomposition"]["k_opt"], 2);
  EXPECT_EQ(j["decomposition"]["components"].size(), 2u);
  EXPECT_EQ(j["decomposition"]["bic_curve"].size(), 2u);
  EXPECT_EQ(j["model"]["mask"], FeatureMask::standard().to_string());
  EXPECT_EQ(j["config"]["k_max"], GmmFitConfig{}.k_max);
  EXPECT_EQ(dump(j, false), dump(nlohmann::json::parse(dump(j, false)), false));
  EXPECT_EQ(dump(j, true).back(), '\n');
}

TEST(RenderSvg, TwoEllipsesPerComponentAndPairLabels) {
  const AmbiguityReport r = two_component_report();
  const Scatterplot p = validate_scatterplot({{0, 0}, {5, 1}, {1, 1}});
  const std::string svg = render_svg(p, r);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = svg.find(needle); at != std::string::npos; at = svg.find(needle, at + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count("<ellipse"), 4u);
  EXPECT_EQ(count("<circle"), 3u);
  EXPECT_EQ(count(">A="), 1u);
  EXPECT_EQ(svg.rfind("</svg>\n"), svg.size() - 7);
  EXPECT_EQ(render_svg(p, r), svg);
}

}  // namespace
}  // namespace clams
