import { ApiClient, createApi } from "./api.js";
import {
  TableModel,
  clusterProfileTable,
  confirmationLines,
  coverageView,
  elbowView,
  readinessView,
  targetingView,
  themesTable,
  SeriesPoint
} from "./console.js";
import { QuizSession } from "./quiz.js";
import { Theme } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = []
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  for (const child of children) node.append(child);
  return node;
}

function renderTable(model: TableModel): HTMLElement {
  if (model.empty) {
    return el("p", { class: "empty" }, [model.emptyMessage ?? "Nothing here yet."]);
  }
  const head = el("tr", {}, model.columns.map((c) => el("th", {}, [c])));
  const body = model.rows.map((row) => el("tr", {}, row.map((cell) => el("td", {}, [cell]))));
  return el("table", { class: "data" }, [el("thead", {}, [head]), el("tbody", {}, body)]);
}

function renderLine(points: SeriesPoint[], overlay: SeriesPoint[] = []): HTMLElement {
  if (points.length === 0) return el("p", { class: "empty" }, ["No data to plot."]);
  const width = 520;
  const height = 220;
  const pad = 36;
  const xs = points.map((p) => p.x);
  const ys = [...points, ...overlay].map((p) => p.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMax = Math.max(...ys, 1);
  const sx = (x: number) =>
    pad + ((x - xMin) / Math.max(xMax - xMin, 1e-9)) * (width - 2 * pad);
  const sy = (y: number) => height - pad - (y / yMax) * (height - 2 * pad);
  const toAttr = (series: SeriesPoint[]) =>
    series.map((p) => `${sx(p.x).toFixed(1)},${sy(p.y).toFixed(1)}`).join(" ");
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "chart");
  const mk = (series: SeriesPoint[], cls: string) => {
    const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
    line.setAttribute("points", toAttr(series));
    line.setAttribute("class", cls);
    svg.appendChild(line);
  };
  mk(points, "series");
  if (overlay.length) mk(overlay, "overlay");
  for (const p of points) {
    const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    dot.setAttribute("cx", sx(p.x).toFixed(1));
    dot.setAttribute("cy", sy(p.y).toFixed(1));
    dot.setAttribute("r", "3");
    const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
    title.textContent = `${p.x}: ${p.label}`;
    dot.appendChild(title);
    svg.appendChild(dot);
  }
  const wrap = el("div", { class: "chart-wrap" });
  wrap.appendChild(svg);
  return wrap;
}

async function renderConsole(api: ApiClient, root: HTMLElement): Promise<void> {
  root.replaceChildren(el("p", {}, ["loading..."]));
  const sections: HTMLElement[] = [];

  let themes: Theme[] = [];
  try {
    themes = await api.getThemes();
  } catch {
    themes = [];
  }
  sections.push(el("h2", {}, ["Attack-vector themes"]), renderTable(themesTable(themes)));

  try {
    const clusters = await api.getClusters();
    sections.push(el("h2", {}, ["Cluster profile"]), renderTable(clusterProfileTable(clusters)));
    sections.push(
      el("p", { class: "meta" }, [
        `model: k=${clusters.model.k}, init=${clusters.model.init}, seed=${clusters.model.seed}, ` +
          `cost=${clusters.model.cost}, iterations=${clusters.model.iterations}`
      ])
    );
  } catch {
    sections.push(el("h2", {}, ["Cluster profile"]), el("p", { class: "empty" }, ["No model in the store yet."]));
  }

  try {
    const elbow = elbowView(await api.getElbow());
    sections.push(el("h2", {}, ["Elbow sweep (cost per k, running minimum)"]));
    sections.push(renderLine(elbow.points, elbow.runningMin));
  } catch {
    sections.push(el("h2", {}, ["Elbow sweep"]), el("p", { class: "empty" }, ["No sweep stored yet."]));
  }

  try {
    const coverage = coverageView(await api.getCombos());
    sections.push(el("h2", {}, ["Combination coverage"]));
    sections.push(
      el("p", { class: "meta" }, [
        `possible=${coverage.possible}, observed=${coverage.observed}, rows=${coverage.totalRows}` +
          (coverage.topSixteen !== null ? `, top-16 coverage=${coverage.topSixteen}` : "")
      ])
    );
    sections.push(coverage.empty ? el("p", { class: "empty" }, ["No categorical rows ingested."]) : renderLine(coverage.points));
  } catch {
    sections.push(el("h2", {}, ["Combination coverage"]), el("p", { class: "empty" }, ["Unavailable."]));
  }

  try {
    const readiness = readinessView(await api.getReadiness());
    sections.push(el("h2", {}, ["Readiness heatmap (low = train first)"]));
    if (readiness.empty) {
      sections.push(el("p", { class: "empty" }, ["No scored responses yet."]));
    } else {
      const head = el("tr", {}, [el("th", {}, ["group"]), ...readiness.themes.map((t) => el("th", {}, [t]))]);
      const rows = readiness.groups.map((group) => {
        const cells = readiness.themes.map((theme) => {
          const cell = readiness.cells.find((c) => c.group === group && c.theme === theme);
          if (!cell) return el("td", { class: "blank" }, ["-"]);
          const hue = Math.round(cell.score * 120);
          return el(
            "td",
            { style: `background: hsl(${hue} 70% 82%)`, title: `n=${cell.support}` },
            [cell.display]
          );
        });
        return el("tr", {}, [el("td", {}, [group]), ...cells]);
      });
      sections.push(el("table", { class: "data" }, [el("thead", {}, [head]), el("tbody", {}, rows)]));
    }

    sections.push(el("h2", {}, ["Dispatch a training wave"]));
    const themeSelect = el("select", { id: "target-theme" });
    for (const theme of readiness.themes) themeSelect.append(el("option", { value: theme }, [theme]));
    const quota = el("input", { type: "number", min: "1", value: "2", id: "target-quota" });
    const button = el("button", {}, ["Target least-ready groups"]);
    const output = el("div", { id: "target-result" });
    button.addEventListener("click", async () => {
      output.replaceChildren(el("p", {}, ["dispatching..."]));
      try {
        const result = targetingView(
          await api.postTargeting(themeSelect.value, Number(quota.value))
        );
        const list = el("ol", {}, result.orderedGroups.map((g) => el("li", {}, [g])));
        output.replaceChildren(
          el("p", {}, [`next wave for ${result.themeId} (quota ${result.quota}):`]),
          list
        );
      } catch (err) {
        output.replaceChildren(el("p", { class: "error" }, [String(err)]));
      }
    });
    sections.push(el("div", { class: "target-panel" }, [themeSelect, quota, button, output]));
  } catch {
    sections.push(el("h2", {}, ["Readiness"]), el("p", { class: "empty" }, ["Unavailable."]));
  }

  root.replaceChildren(...sections);
}

async function renderQuiz(api: ApiClient, root: HTMLElement): Promise<void> {
  const idInput = el("input", { placeholder: "assessment id", id: "quiz-id" });
  const userInput = el("input", { placeholder: "user id", id: "quiz-user" });
  const groupInput = el("input", { placeholder: "group id", id: "quiz-group" });
  const loadButton = el("button", {}, ["Load assessment"]);
  const area = el("div", { id: "quiz-area" });
  root.replaceChildren(
    el("div", { class: "quiz-controls" }, [idInput, userInput, groupInput, loadButton]),
    area
  );

  loadButton.addEventListener("click", async () => {
    area.replaceChildren(el("p", {}, ["loading..."]));
    let session: QuizSession;
    try {
      const assessment = await api.getAssessment(idInput.value.trim());
      session = new QuizSession(assessment, {
        userId: userInput.value.trim() || "anonymous",
        groupId: groupInput.value.trim() || "unassigned"
      });
    } catch (err) {
      area.replaceChildren(el("p", { class: "error" }, [String(err)]));
      return;
    }

    const status = el("p", { class: "meta" });
    const refreshStatus = () => {
      const p = session.progress();
      status.textContent = `${p.answered}/${p.total} answered (draft saved locally)`;
    };
    const items = session.assessment.items.map((item, index) => {
      const options = item.choices.map((choice, ci) => {
        const radio = el("input", {
          type: "radio",
          name: item.item_id,
          value: String(ci)
        }) as HTMLInputElement;
        if (session.answerOf(item.item_id) === ci) radio.checked = true;
        radio.addEventListener("change", () => {
          session.answer(item.item_id, ci);
          refreshStatus();
        });
        return el("label", { class: "choice" }, [radio, choice]);
      });
      return el("div", { class: "item" }, [
        el("p", { class: "prompt" }, [`${index + 1}. ${item.prompt}`]),
        ...options
      ]);
    });

    const submit = el("button", {}, ["Submit answers"]);
    const result = el("div", { id: "quiz-result" });
    submit.addEventListener("click", async () => {
      result.replaceChildren(el("p", {}, ["submitting..."]));
      const outcome = await session.submit(api);
      if (outcome.kind === "accepted") {
        const lines = confirmationLines(outcome.scores).map((line) =>
          el("li", {}, [`${line.tag}: ${line.correct}/${line.attempted}`])
        );
        result.replaceChildren(
          el("p", { class: "ok" }, ["Submitted. Your readiness contribution per topic:"]),
          el("ul", {}, lines)
        );
      } else {
        const reason =
          outcome.kind === "rejected"
            ? `server rejected the submission (${outcome.status}): ${JSON.stringify(outcome.detail)}`
            : outcome.message;
        result.replaceChildren(
          el("p", { class: "error" }, [
            `${reason} - your answers are saved locally; fix and press submit to retry.`
          ])
        );
      }
    });

    refreshStatus();
    area.replaceChildren(status, ...items, submit, result);
  });
}

function boot(): void {
  const params = new URLSearchParams(location.search);
  const api = createApi({ token: params.get("token") ?? undefined });
  const tabs = el("div", { class: "tabs" });
  const quizTab = el("button", { class: "tab active" }, ["Take a quiz"]);
  const consoleTab = el("button", { class: "tab" }, ["Analyst console"]);
  const content = el("div", { id: "content" });
  tabs.append(quizTab, consoleTab);
  document.body.append(el("h1", {}, ["Security awareness training"]), tabs, content);

  quizTab.addEventListener("click", () => {
    quizTab.classList.add("active");
    consoleTab.classList.remove("active");
    void renderQuiz(api, content);
  });
  consoleTab.addEventListener("click", () => {
    consoleTab.classList.add("active");
    quizTab.classList.remove("active");
    void renderConsole(api, content);
  });
  void renderQuiz(api, content);
}

boot();
