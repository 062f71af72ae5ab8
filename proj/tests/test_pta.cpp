//===-- test_pta.cpp - Base pointer-analysis rules -----------------------------===//

#include "doctest.h"

#include "analysis_fixture.h"

using namespace solar;
using solar::test::analyze;

TEST_CASE("allocation puts the site object into the target set") {
  auto a = analyze(R"(
class A {}
class Main { static method main(): void { v = new A; } }
)");
  CHECK(a.pointsTo("Main.main", "v") ==
        std::set<std::string>{"heap:A@Main.main/new/0"});
}

TEST_CASE("copy, store, and load reach a hand-computed fixpoint") {
  auto a = analyze(R"(
class A { field f: A; }
class Main {
  static method main(): void {
    x = new A;
    y = x;
    y.f = x;
    z = y.f;
  }
}
)");
  CHECK(a.pointsTo("Main.main", "z") ==
        std::set<std::string>{"heap:A@Main.main/new/0"});
  CHECK(a.pointsTo("Main.main", "y") == a.pointsTo("Main.main", "x"));
}

TEST_CASE("virtual calls dispatch per receiver and flow args and returns") {
  auto a = analyze(R"(
class X {}
class D { method m1(X): X { ret = p0; } }
class B extends D { method m1(X): X { ret = p0; } }
class Main {
  static method main(): void {
    b = new B;
    x = new X;
    r = b.m1(x);
  }
}
)");
  CHECK(a.callEdges() ==
        std::set<std::pair<std::string, std::string>>{
            {"Main.main/m1/0", "B.m1"}});
  CHECK(a.pointsTo("B.m1", "p0") ==
        std::set<std::string>{"heap:X@Main.main/new/1"});
  CHECK(a.pointsTo("Main.main", "r") ==
        std::set<std::string>{"heap:X@Main.main/new/1"});
  CHECK(a.pointsTo("B.m1", "this") ==
        std::set<std::string>{"heap:B@Main.main/new/0"});
}

TEST_CASE("fields never attach to objects of unknown dynamic type") {
  auto a = analyze(R"(
class A { field f: A; }
class Main {
  static method main(): void {
    s = unknown_string;
    c = Class.forName(s);
    v = c.newInstance();
    v.f = v;
    w = v.f;
  }
}
)");
  // The store finds no known-typed base, so nothing flows.
  CHECK(a.pointsTo("Main.main", "w").empty());
  for (size_t i = 0; i < a.state().objects.size(); ++i) {
    const AbstractObject &o = a.state().objects[(ObjId)i];
    if (o.kind != ObjKind::Heap || o.typeKnown())
      continue;
    for (auto &fld : a.prog->findClass("A")->declaredFields())
      CHECK(a.state().fieldPt((ObjId)i, fld.get()).empty());
  }
}

TEST_CASE("statics flow through static loads and stores") {
  auto a = analyze(R"(
class T {}
class Lib {
  static field cache: T;
  static method clinit(): void { t = new T; Lib.cache = t; }
}
class Main { static method main(): void { v = Lib.cache; } }
)");
  CHECK(a.pointsTo("Main.main", "v") ==
        std::set<std::string>{"heap:T@Lib.clinit/new/0"});
}

TEST_CASE("static initializers run for classes discovered reflectively") {
  auto a = analyze(R"(
class T {}
class Lib {
  static field cache: T;
  static method clinit(): void { t = new T; Lib.cache = t; }
}
class Main {
  static method main(): void {
    s = "Lib";
    c = Class.forName(s);
    v = Lib.cache;
  }
}
)");
  CHECK(a.state().isReachable(a.method("Lib.clinit")));
  CHECK(a.pointsTo("Main.main", "v") ==
        std::set<std::string>{"heap:T@Lib.clinit/new/0"});
}

TEST_CASE("array literals collapse elements and keep an exact snapshot") {
  auto a = analyze(R"(
class A {}
class B {}
class Main {
  static method main(): void {
    x = new A;
    y = new B;
    arr = array [x, y];
    v = arr[*];
    arr[*] = x;
  }
}
)");
  CHECK(a.heapTypes("Main.main", "v") == std::set<std::string>{"A", "B"});
  const Statement &lit = a.stmtAt("Main.main/array/0");
  CHECK(lit.args.size() == 2);
}

TEST_CASE("casts filter by subtype and discard unrelated objects") {
  auto a = analyze(R"(
class D {}
class B extends D {}
class E {}
class Main {
  static method main(): void {
    b = new B;
    e = new E;
    x = b;
    x = e;
    d = (D) x;
  }
}
)");
  CHECK(a.heapTypes("Main.main", "d") == std::set<std::string>{"B"});
}

TEST_CASE("calls on unknown-typed receivers stay within the Object protocol") {
  auto a = analyze(R"(
class A { method m1(): void {} }
class Main {
  static method main(): void {
    s = unknown_string;
    c = Class.forName(s);
    v = c.newInstance();
    t = v.toString();
    k = v.getClass();
    w = v.m1();
  }
}
)");
  CHECK(a.edgeTargets("Main.main/m1/0").empty());
  CHECK(a.edgeTargets("Main.main/toString/0") ==
        std::set<std::string>{"Object.toString"});
  CHECK(a.pointsTo("Main.main", "t") ==
        std::set<std::string>{"<unknown-string>@Main.main/toString/0"});
  CHECK(a.pointsTo("Main.main", "k") ==
        std::set<std::string>{"class:<unknown>@Main.main/getClass/0"});
}

TEST_CASE("solving twice yields identical states and a drained worklist") {
  const char *text = R"(
class X {}
class D { method m1(X): void {} }
class B extends D { method m1(X): void {} }
class Main {
  static method main(): void {
    s = unknown_string;
    c = Class.forName(s);
    m = c.getMethod(s);
    o = c.newInstance();
    x = new X;
    args = array [x];
    r = (Object) m.invoke(o, args);
    d = (D) o;
    y = d.m1(x);
  }
}
)";
  auto a1 = solar::test::analyze(text);
  auto a2 = solar::test::analyze(text);
  CHECK(a1.state().factCount() == a2.state().factCount());
  CHECK(a1.callEdges() == a2.callEdges());
  CHECK(toJson(a1.report()) == toJson(a2.report()));

  // Re-solving a solved state adds nothing.
  CHECK_FALSE(a1.engine->sweepOnce());
  size_t before = a1.state().factCount();
  CHECK_FALSE(a1.engine->sweepOnce());
  CHECK(a1.state().factCount() == before);
}

TEST_CASE("the sweep budget guards against divergence") {
  EngineConfig config;
  config.maxSweeps = 1;
  auto prog = parseProgram(R"(
class A { field f: A; }
class Main {
  static method main(): void {
    x = new A;
    y = x;
    y.f = x;
    z = y.f;
  }
}
)");
  Engine eng(*prog, config);
  CHECK_THROWS_AS(eng.solve(), BudgetExceeded);
}
