//===-- test_annotations.cpp - Annotation parsing and application ---------------===//

#include "doctest.h"

#include "analysis_fixture.h"

using namespace solar;
using solar::test::analyze;

namespace {

const char *kUnknownForName = R"(
class X {}
class Lib1 { static method run(X): void {} method helper(): void {} }
class Lib2 { static method run(X): void {} }
class Main {
  static method main(): void {
    cn = unknown_string;
    c = Class.forName(cn);
    mn = unknown_string;
    m = c.getMethod(mn);
    x = new X;
    args = array [x];
    r = (Object) m.invoke(null, args);
  }
}
)";

} // namespace

TEST_CASE("annotation lines parse into per-site accumulations") {
  AnnotationSet set = AnnotationSet::parse(R"(
# comment lines and blanks are skipped

Main.main/Class.forName/0 A
Main.main/Class.forName/0 B
Main.main/getMethod/0 NONE
Main.main/getMethods/1 METHOD Lib.run(X)
Main.main/getMethods/1 METHOD Lib.stop()
)");
  const Annotation *classes = set.find("Main.main/Class.forName/0");
  REQUIRE(classes != nullptr);
  CHECK(classes->kind == Annotation::Kind::Classes);
  CHECK(classes->classNames == std::vector<std::string>{"A", "B"});

  const Annotation *none = set.find("Main.main/getMethod/0");
  REQUIRE(none != nullptr);
  CHECK(none->kind == Annotation::Kind::None);

  const Annotation *methods = set.find("Main.main/getMethods/1");
  REQUIRE(methods != nullptr);
  CHECK(methods->kind == Annotation::Kind::Methods);
  REQUIRE(methods->descriptors.size() == 2);
  CHECK(methods->descriptors[0].className == "Lib");
  CHECK(methods->descriptors[0].methodName == "run");
  CHECK(methods->descriptors[0].paramTypeNames ==
        std::vector<std::string>{"X"});
  CHECK(methods->descriptors[1].paramTypeNames.empty());
}

TEST_CASE("malformed annotation lines are rejected") {
  CHECK_THROWS_AS(AnnotationSet::parse("not-a-site-id A"), AnnotationError);
  CHECK_THROWS_AS(AnnotationSet::parse("Main.main/invoke/x A"),
                  AnnotationError);
  CHECK_THROWS_AS(AnnotationSet::parse("Main.main/invoke/0"),
                  AnnotationError);
  CHECK_THROWS_AS(
      AnnotationSet::parse("Main.main/getMethod/0 METHOD nosuchform"),
      AnnotationError);
  CHECK_THROWS_AS(AnnotationSet::parse("Main.main/f/0 A\nMain.main/f/0 NONE"),
                  AnnotationError);
}

TEST_CASE("class annotations replace unresolved forName output") {
  AnnotationSet ann = AnnotationSet::parse(
      "Main.main/Class.forName/0 Lib1\nMain.main/Class.forName/0 Lib2\n");
  auto a = analyze(kUnknownForName, {}, &ann);
  CHECK(a.pointsTo("Main.main", "c") ==
        std::set<std::string>{"class:Lib1@Main.main/Class.forName/0",
                              "class:Lib2@Main.main/Class.forName/0"});
  // The static invoke resolves to exactly the annotated classes' matching
  // members (run matches the one-element argument array; helper does not).
  CHECK(a.edgeTargets("Main.main/invoke/0") ==
        std::set<std::string>{"Lib1.run", "Lib2.run"});
  CHECK(a.report().sound);
}

TEST_CASE("NONE suppresses a site's output entirely") {
  AnnotationSet ann = AnnotationSet::parse("Main.main/Class.forName/0 NONE\n");
  auto a = analyze(kUnknownForName, {}, &ann);
  CHECK(a.pointsTo("Main.main", "c").empty());
  CHECK(a.pointsTo("Main.main", "m").empty());
  CHECK(a.report().sound); // a dead reflective call hides nothing
}

TEST_CASE("method annotations pin introspection results") {
  const char *text = R"(
class X {}
class Bean {
  method setA(X): void {}
  method setB(X): void {}
  method other(): void {}
}
class Main {
  static method main(): void {
    cn = unknown_string;
    c = Class.forName(cn);
    ms = c.getMethods();
    m = ms[*];
    o = new Bean;
    x = new X;
    args = array [x];
    r = (Object) m.invoke(o, args);
  }
}
)";
  AnnotationSet ann = AnnotationSet::parse(
      "Main.main/getMethods/0 METHOD Bean.setA(X)\n"
      "Main.main/getMethods/0 METHOD Bean.setB(X)\n");
  auto a = analyze(text, {}, &ann);
  CHECK(a.edgeTargets("Main.main/invoke/0") ==
        std::set<std::string>{"Bean.setA", "Bean.setB"});
}

TEST_CASE("unannotated sites keep their rule-derived output") {
  const char *text = R"(
class A { method m1(): void {} }
class Main {
  static method main(): void {
    s1 = "A";
    c1 = Class.forName(s1);
    s2 = unknown_string;
    c2 = Class.forName(s2);
  }
}
)";
  AnnotationSet ann = AnnotationSet::parse("Main.main/Class.forName/1 A\n");
  auto a = analyze(text, {}, &ann);
  CHECK(a.pointsTo("Main.main", "c1") ==
        std::set<std::string>{"class:A@Main.main/Class.forName/0"});
  CHECK(a.pointsTo("Main.main", "c2") ==
        std::set<std::string>{"class:A@Main.main/Class.forName/1"});
}

TEST_CASE("annotation application is idempotent across solves") {
  AnnotationSet ann = AnnotationSet::parse(
      "Main.main/Class.forName/0 Lib1\nMain.main/Class.forName/0 Lib2\n");
  auto a1 = analyze(kUnknownForName, {}, &ann);
  auto a2 = analyze(kUnknownForName, {}, &ann);
  CHECK(a1.state().factCount() == a2.state().factCount());
  CHECK(toJson(a1.report()) == toJson(a2.report()));
  CHECK_FALSE(a1.engine->sweepOnce());
}

TEST_CASE("annotations that cannot resolve are hard errors") {
  auto prog = parseProgram(kUnknownForName);

  AnnotationSet unknownClass =
      AnnotationSet::parse("Main.main/Class.forName/0 NoSuch\n");
  CHECK_THROWS_AS(Engine(*prog, {}, &unknownClass), AnnotationError);

  AnnotationSet unknownSite = AnnotationSet::parse("Main.main/invoke/7 A\n");
  CHECK_THROWS_AS(Engine(*prog, {}, &unknownSite), AnnotationError);

  AnnotationSet wrongKind = AnnotationSet::parse("Main.main/invoke/0 A\n");
  CHECK_THROWS_AS(Engine(*prog, {}, &wrongKind), AnnotationError);

  AnnotationSet badDescriptor =
      AnnotationSet::parse("Main.main/getMethod/0 METHOD Lib1.nosuch()\n");
  CHECK_THROWS_AS(Engine(*prog, {}, &badDescriptor), AnnotationError);

  AnnotationSet methodOnForName =
      AnnotationSet::parse("Main.main/Class.forName/0 METHOD Lib1.run(X)\n");
  CHECK_THROWS_AS(Engine(*prog, {}, &methodOnForName), AnnotationError);
}

TEST_CASE("annotating every unknown entry empties the unsound list") {
  // Unannotated, the static invoke's method object has an unknown name and
  // class, so the call is flagged; the class annotation then removes every
  // unknown class object and the verdict flips.
  auto before = analyze(kUnknownForName);
  CHECK_FALSE(before.report().sound);

  AnnotationSet ann = AnnotationSet::parse(
      "Main.main/Class.forName/0 Lib1\nMain.main/Class.forName/0 Lib2\n");
  auto after = analyze(kUnknownForName, {}, &ann);
  for (size_t i = 0; i < after.state().objects.size(); ++i) {
    const AbstractObject &o = after.state().objects[(ObjId)i];
    if (o.kind == ObjKind::ClassObj)
      CHECK(o.typeKnown());
  }
  CHECK(after.report().sound);
}
