#include <gtest/gtest.h>

#include <sstream>

#include "vfield/commands.hpp"

using namespace vfield;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("vfield_certlab_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(std::vector<std::string> args, std::string* output = nullptr)
{
    args.insert(args.begin(), "vfield");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
    if (output) *output = out.str() + err.str();
    return rc;
}

std::string slurp(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
}

} // namespace

TEST(ElementParser, Terms)
{
    auto ctx = Context::equal(2);
    EXPECT_EQ(parse_element(ctx, "t^(1/2)"), Series::monomial(ctx, FqElem{1}, make_rational(1, 2)));
    EXPECT_EQ(parse_element(ctx, "1 + t + t^-1"), Series::one(ctx) + Series::monomial(ctx, FqElem{1}, Rational(1)) +
                                                      Series::monomial(ctx, FqElem{1}, Rational(-1)));
    auto m = Context::mixed(2, 0, ExtRat(8));
    EXPECT_EQ(parse_element(m, "3"), Series::from_int(m, 3));
    EXPECT_EQ(parse_element(m, "1 + p^(1/64)"), Series::one(m) + Series::monomial(m, FqElem{1}, make_rational(1, 64)));
    EXPECT_THROW(parse_element(ctx, "t^(1/"), UsageError);
    EXPECT_THROW(parse_element(ctx, "x"), UsageError);
}

TEST(CertificateJson, SeriesAndCutRoundTrip)
{
    auto ctx = Context::equal(3);
    Series s = Series::monomial(ctx, FqElem{2}, make_rational(-1, 3)) + Series::monomial(ctx, FqElem{1}, Rational(2));
    EXPECT_EQ(series_from_json(ctx, to_json(s)), s);
    Series inexact = as_root(Series::monomial(ctx, FqElem{1}, Rational(-1)));
    EXPECT_EQ(series_from_json(ctx, to_json(inexact)), inexact);
    Cut c(ExtRat::frac(-1, 2), true);
    EXPECT_EQ(cut_from_json(to_json(c)), c);
    EXPECT_EQ(to_json(c).at("bound"), "-1/2");
}

TEST(Cli, SpecExamplesAndRoundTrip)
{
    TempDir dir;
    std::string out;
    EXPECT_EQ(run({"asfamily", "--p", "2", "--base", "fp_t", "--n", "5", "--out", dir.file("as.json")}, &out), 0) << out;
    auto j = load_json(dir.file("as.json"));
    EXPECT_EQ(j.at("certs").size(), 5u);
    EXPECT_EQ(j.at("version"), kCertificateVersion);
    EXPECT_EQ(run({"verify", dir.file("as.json")}, &out), 0) << out;

    EXPECT_EQ(run({"semitame", "--p", "2", "--base", "laurent", "--out", dir.file("st.json")}, &out), 2) << out;
    auto st = load_json(dir.file("st.json"));
    EXPECT_EQ(st.at("results").at("semitame").at("conditions").at("e").at("verdict"), "refuted");
    auto w = series_from_json(Context::equal(2), st.at("results").at("semitame").at("conditions").at("e").at("witness"));
    EXPECT_EQ(w, Series::monomial(Context::equal(2), FqElem{1}, make_rational(1, 2)));
    EXPECT_EQ(run({"verify", dir.file("st.json")}, &out), 0) << out;

    EXPECT_EQ(run({"bogus"}, &out), 64);
    EXPECT_EQ(run({"asfamily", "--base", "nope", "--out", dir.file("x.json")}, &out), 64);
    EXPECT_EQ(run({"verify", dir.file("missing.json")}, &out), 64);
}

TEST(Cli, TamperDetection)
{
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"asfamily", "--n", "2", "--out", dir.file("as.json")}, &out), 0) << out;
    auto j = load_json(dir.file("as.json"));
    auto& realized = j["certs"][0]["value_set"]["realized"];
    ASSERT_GE(realized.size(), 2u);
    auto& value = realized[1]["value"];
    value = (ExtRat::parse(value.get<std::string>()) + ExtRat::frac(1, 4)).str();
    auto rep = verify_certificate(j);
    EXPECT_FALSE(rep.ok());
    ASSERT_FALSE(rep.mismatches.empty());
    EXPECT_NE(rep.mismatches.front().find("witness re-evaluation"), std::string::npos) << rep.mismatches.front();

    auto k = load_json(dir.file("as.json"));
    k["certs"][1]["claims"]["defect"] = 2;
    EXPECT_FALSE(verify_certificate(k).ok());

    save_certificate_file_json(j, dir.file("tampered.json"));
    EXPECT_EQ(run({"verify", dir.file("tampered.json")}, &out), 2) << out;
}

TEST(Cli, ConfigMismatch)
{
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"asfamily", "--n", "1", "--out", dir.file("as.json")}, &out), 0) << out;
    EXPECT_EQ(run({"verify", dir.file("as.json"), "--denominator", "16"}, &out), 2);
    EXPECT_NE(out.find("config mismatch"), std::string::npos) << out;
    EXPECT_EQ(run({"verify", dir.file("as.json"), "--p", "2"}, &out), 0) << out;

    auto j = load_json(dir.file("as.json"));
    SessionConfig other;
    other.D = 16;
    auto rep = verify_certificate(j, other);
    EXPECT_TRUE(rep.config_mismatch);
    EXPECT_EQ(rep.exit_code(), 2);
}

TEST(Cli, DeterministicAndAtomicOutput)
{
    TempDir dir;
    std::string out;
    ASSERT_EQ(run({"kummerfamily", "--n", "2", "--out", dir.file("a.json")}, &out), 0) << out;
    ASSERT_EQ(run({"kummerfamily", "--n", "2", "--out", dir.file("b.json")}, &out), 0) << out;
    EXPECT_EQ(slurp(dir.file("a.json")), slurp(dir.file("b.json")));
    for (const auto& e : fs::directory_iterator(dir.path)) EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos);
    EXPECT_EQ(run({"verify", dir.file("a.json")}, &out), 0) << out;
    EXPECT_EQ(run({"sigma", "--input", dir.file("a.json"), "--out", dir.file("s.json")}, &out), 0) << out;
    EXPECT_EQ(run({"verify", dir.file("s.json")}, &out), 0) << out;
}

TEST(Cli, DistanceAndField)
{
    TempDir dir;
    std::string out;
    EXPECT_EQ(run({"distance", "--as-root", "t^-1", "--base", "pdiv_tower", "--out", dir.file("d.json")}, &out), 0) << out;
    auto j = load_json(dir.file("d.json"));
    EXPECT_EQ(j.at("samples").at(0).at("dist").at("hi").at("bound"), "0/1");
    EXPECT_EQ(run({"verify", dir.file("d.json")}, &out), 0) << out;
    EXPECT_EQ(run({"distance", "1 + p^(1/2)", "--mode", "mixed", "--base", "qp", "--out", dir.file("m.json")}, &out), 0) << out;
    EXPECT_EQ(run({"field", "--base", "qp_pdiv_tower", "--mode", "mixed", "--out", dir.file("f.json")}, &out), 0) << out;
    EXPECT_EQ(run({"asfamily", "--base", "pdiv_tower", "--out", dir.file("t.json")}, &out), 0) << out;
    EXPECT_NE(out.find("K is perfect"), std::string::npos);
}
