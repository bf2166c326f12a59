import { ApiClient } from "./api.js";
import { initialState, reduce, togglePattern, type Action, type ViewState } from "./state.js";
import {
  buildFilterView,
  clearAll,
  criteriaWithDifficulty,
  searchStudent,
  searchTask,
  setStudentScoreRange,
  setTaskScoreRange,
  toggleBackground,
  toggleDifficulty,
  toggleTaskType,
} from "./views/filter.js";
import { buildSummaryCards, type GroupCardModel, type MemberSort } from "./views/summary.js";
import { buildPatternTable, schemaIndex } from "./views/patterns.js";
import { applyHighlight, layoutTree, type TreeLayout } from "./views/tree.js";
import { buildTranscript } from "./views/detail.js";
import { donutSvg } from "./views/donut.js";
import type { CodeEntry, Criteria, Overview } from "./types.js";

const API_BASE = (window as { CONVO_MINER_API?: string }).CONVO_MINER_API ?? "";
const api = new ApiClient(API_BASE);

let state: ViewState = initialState;
let overview: Overview | null = null;
let schema: Map<string, CodeEntry> = new Map();
let difficultySelection: number[] = [];
let memberSort: MemberSort | undefined;
let fetchSerial = 0;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing container #${id}`);
  return node;
}

function esc(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => `&#${ch.charCodeAt(0)};`);
}

function dispatch(action: Action): void {
  state = reduce(state, action);
  void refresh();
}

/** Criteria the pattern/tree panes use: the active filter narrowed to the
 * selected summary group's members, when one is selected. */
function nuanceCriteria(groups: GroupCardModel[] | null): Criteria {
  if (!state.selectedGroup || !groups) return state.criteria;
  const card = groups.find((g) => g.key === state.selectedGroup);
  if (!card) return state.criteria;
  return state.groupingMode === "task_grouping"
    ? { ...state.criteria, task_types: [state.selectedGroup] }
    : state.criteria;
}

async function refresh(): Promise<void> {
  const serial = ++fetchSerial;
  const stale = () => serial !== fetchSerial; // latest-wins: drop superseded responses

  renderFilter();
  try {
    const summary = await api.summary(state.criteria, state.groupingMode, state.groupBy);
    if (stale()) return;
    const cards = buildSummaryCards(summary.groups, state.selectedGroup, memberSort);
    renderSummary(cards);

    const criteria = nuanceCriteria(cards);
    const [patterns, tree] = await Promise.all([
      api.patterns(criteria, { key: state.patternSort.key, direction: state.patternSort.direction }),
      api.tree({
        criteria,
        highlight_pattern: state.selectedPattern ?? undefined,
      }),
    ]);
    if (stale()) return;
    renderPatterns(patterns.patterns);
    renderTree(applyHighlight(layoutTree(tree.tree, schema), tree.highlight));

    if (state.selectedLeaf) {
      const detail = await api.conversation(state.selectedLeaf.student, state.selectedLeaf.task);
      if (stale()) return;
      renderDetail(detail);
    } else {
      el("detail").innerHTML = '<p class="hint">Select a leaf tag in the tree.</p>';
    }
  } catch (error) {
    if (!stale()) {
      el("status").textContent = `request failed: ${String(error)}`;
    }
  }
}

function renderFilter(): void {
  if (!overview) return;
  const model = buildFilterView(overview, state.criteria, difficultySelection);
  const bars = (items: { label: string; count: number; heightFraction: number; selected: boolean }[], kind: string) =>
    items
      .map(
        (bar) => `
        <div class="bar ${bar.selected ? "selected" : ""}" data-kind="${kind}" data-label="${esc(bar.label)}">
          <div class="bar-fill" style="height:${Math.round(bar.heightFraction * 60)}px"></div>
          <span class="bar-label">${esc(bar.label)}</span>
          <span class="bar-count">${bar.count}</span>
        </div>`,
      )
      .join("");
  const density = (values: number[]) => {
    const max = Math.max(1, ...values);
    return values
      .map((v) => `<div class="density-bin" style="height:${Math.round((v / max) * 30)}px"></div>`)
      .join("");
  };
  el("filter").innerHTML = `
    <h3>Tasks</h3>
    <input id="task-search" placeholder="find task by id" value="${esc(state.criteria.task_ids?.[0] ?? "")}">
    <div class="histogram" id="difficulty-bars">${bars(model.difficulty, "difficulty")}</div>
    <div class="histogram" id="type-bars">${bars(model.taskTypes, "task-type")}</div>
    <div class="density">${density(model.taskScoreDensity)}</div>
    <label>task score range <input id="task-score-lo" type="range" min="0" max="1" step="0.05" value="${state.criteria.task_score_range?.[0] ?? 0}">
    <input id="task-score-hi" type="range" min="0" max="1" step="0.05" value="${state.criteria.task_score_range?.[1] ?? 1}"></label>
    <h3>Students</h3>
    <input id="student-search" placeholder="find student by alias" value="${esc(state.criteria.student_aliases?.[0] ?? "")}">
    ${Object.entries(model.backgrounds)
      .map(([attr, items]) => `<div class="histogram" data-attr="${attr}">${bars(items, `bg-${attr}`)}</div>`)
      .join("")}
    <div class="density">${density(model.studentScoreDensity)}</div>
    <label>student score range <input id="score-lo" type="range" min="0" max="1" step="0.05" value="${state.criteria.score_range?.[0] ?? 0}">
    <input id="score-hi" type="range" min="0" max="1" step="0.05" value="${state.criteria.score_range?.[1] ?? 1}"></label>
    <button id="clear-filters">clear all filters</button>`;
  wireFilterEvents();
}

function wireFilterEvents(): void {
  el("filter").querySelectorAll<HTMLElement>(".bar").forEach((bar) => {
    bar.addEventListener("click", () => {
      const kind = bar.dataset.kind ?? "";
      const label = bar.dataset.label ?? "";
      if (kind === "difficulty") {
        difficultySelection = toggleDifficulty(difficultySelection, Number(label));
        dispatch({ type: "set-criteria", criteria: criteriaWithDifficulty(state.criteria, difficultySelection) });
      } else if (kind === "task-type") {
        dispatch({ type: "set-criteria", criteria: toggleTaskType(state.criteria, label) });
      } else if (kind.startsWith("bg-")) {
        const attr = kind.slice(3) as "dv_experience" | "cs_background" | "gpt_familiarity";
        dispatch({ type: "set-criteria", criteria: toggleBackground(state.criteria, attr, label) });
      }
    });
  });
  (el("task-search") as HTMLInputElement).addEventListener("change", (event) => {
    dispatch({ type: "set-criteria", criteria: searchTask(state.criteria, (event.target as HTMLInputElement).value) });
  });
  (el("student-search") as HTMLInputElement).addEventListener("change", (event) => {
    dispatch({ type: "set-criteria", criteria: searchStudent(state.criteria, (event.target as HTMLInputElement).value) });
  });
  const slider = (loId: string, hiId: string, setter: (c: Criteria, lo: number, hi: number) => Criteria) => {
    const update = () => {
      const lo = Number((el(loId) as HTMLInputElement).value);
      const hi = Number((el(hiId) as HTMLInputElement).value);
      dispatch({ type: "set-criteria", criteria: setter(state.criteria, Math.min(lo, hi), Math.max(lo, hi)) });
    };
    el(loId).addEventListener("change", update);
    el(hiId).addEventListener("change", update);
  };
  slider("score-lo", "score-hi", setStudentScoreRange);
  slider("task-score-lo", "task-score-hi", setTaskScoreRange);
  el("clear-filters").addEventListener("click", () => {
    difficultySelection = [];
    dispatch({ type: "set-criteria", criteria: clearAll() });
  });
}

function renderSummary(cards: GroupCardModel[]): void {
  const metricBar = (label: string, fraction: number, value: string, dark: boolean) => `
    <div class="metric-row" data-metric="${label}">
      <span class="metric-label">${label}</span>
      <div class="metric-bar ${dark ? "dark" : "light"}" style="width:${Math.round(fraction * 120)}px"></div>
      <span class="metric-value">${value}</span>
    </div>`;
  el("summary").innerHTML = cards
    .map(
      (card) => `
      <div class="group-card ${card.selected ? "selected" : ""}" data-group="${esc(card.key)}">
        <header>${esc(card.key)} <small>${card.memberCount} members</small></header>
        ${donutSvg(Object.fromEntries(card.donut.map((s) => [s.category, s.fraction])))}
        <div class="stacked">${card.stacked
          .map((s) => `<div style="width:${(s.fraction * 100).toFixed(2)}%;background:${s.color}" title="${s.category}"></div>`)
          .join("")}</div>
        ${metricBar("IG", card.metrics.igFraction, card.metrics.meanIg.toFixed(3), false)}
        ${metricBar("RL", card.metrics.rlFraction, card.metrics.meanRl.toFixed(1), false)}
        ${metricBar("score", card.metrics.scoreFraction, card.metrics.meanScore.toFixed(2), true)}
        ${card.selected ? renderRows(card) : ""}
      </div>`,
    )
    .join("");
  el("summary").querySelectorAll<HTMLElement>(".group-card").forEach((node) => {
    node.addEventListener("click", (event) => {
      if ((event.target as HTMLElement).closest(".member-row, .metric-row")) return;
      const key = node.dataset.group ?? null;
      dispatch({ type: "select-group", key: state.selectedGroup === key ? null : key });
    });
  });
  el("summary").querySelectorAll<HTMLElement>(".metric-row").forEach((node) => {
    node.addEventListener("click", (event) => {
      event.stopPropagation();
      const metric = node.dataset.metric;
      const key = metric === "IG" ? "mean_ig" : metric === "RL" ? "mean_rl" : "mean_score";
      memberSort =
        memberSort && memberSort.key === key && memberSort.direction === "asc"
          ? { key, direction: "desc" }
          : { key, direction: "asc" };
      void refresh();
    });
  });
}

function renderRows(card: GroupCardModel): string {
  return `<div class="rows">${card.rows
    .map(
      (row) => `
      <div class="member-row">
        <span class="member-id">${esc(row.member)}</span>
        <div class="stacked small">${row.stacked
          .map((s) => `<div style="width:${(s.fraction * 100).toFixed(2)}%;background:${s.color}"></div>`)
          .join("")}</div>
        <span class="member-score">${row.metrics.meanScore.toFixed(2)}</span>
      </div>`,
    )
    .join("")}</div>`;
}

function renderPatterns(rows: import("./types.js").PatternRow[]): void {
  const models = buildPatternTable(rows, schema, state.selectedPattern);
  el("patterns").innerHTML = `
    <table>
      <thead><tr>
        <th data-sort="length">L</th><th>Pattern</th>
        <th data-sort="support">C</th><th data-sort="avg_score">Avg.</th>
      </tr></thead>
      <tbody>${models
        .map(
          (row, i) => `
          <tr class="${row.selected ? "selected" : ""}" data-row="${i}">
            <td>${row.length}</td>
            <td>${row.wrapped ? "{" : ""}${row.chips
              .map((chip) => `<span class="chip" style="background:${chip.color}" title="${esc(chip.label)}">${esc(chip.abbr)}</span>`)
              .join(esc(row.joiner))}${row.wrapped ? "}" : ""}</td>
            <td>${row.support}</td><td>${row.avgScore.toFixed(2)}</td>
          </tr>`,
        )
        .join("")}</tbody>
    </table>`;
  el("patterns").querySelectorAll<HTMLElement>("th[data-sort]").forEach((th) => {
    th.addEventListener("click", () =>
      dispatch({ type: "set-pattern-sort", key: th.dataset.sort as "length" | "support" | "avg_score" }),
    );
  });
  el("patterns").querySelectorAll<HTMLTableRowElement>("tbody tr").forEach((tr) => {
    tr.addEventListener("click", () => {
      const row = rows[Number(tr.dataset.row)];
      if (row) dispatch(togglePattern(state, { kind: row.kind, codes: row.codes }));
    });
  });
}

function renderTree(layout: TreeLayout): void {
  const cls = (s: string) => (s === "normal" ? "" : s);
  const svg = `
    <svg viewBox="0 0 ${Math.max(layout.width, 200)} ${Math.max(layout.height, 60)}" class="tree-svg">
      ${layout.edges
        .map(
          (e) => `<path class="edge ${cls(e.state)}" d="M ${e.x1} ${e.y1} C ${(e.x1 + e.x2) / 2} ${e.y1}, ${(e.x1 + e.x2) / 2} ${e.y2}, ${e.x2} ${e.y2}"
            stroke-width="${e.strokeWidth.toFixed(2)}" style="opacity:${e.opacity.toFixed(3)}"/>`,
        )
        .join("")}
      ${layout.nodes
        .map((n) =>
          n.slices.length
            ? `<g class="node ${cls(n.state)}" transform="translate(${n.x},${n.y})">${n.slices
                .map((s) => `<path d="${s.path}" fill="${s.color}"/>`)
                .join("")}<title>${n.codes.join(", ")} (${n.count})</title></g>`
            : `<circle class="node ${cls(n.state)}" cx="${n.x}" cy="${n.y}" r="${n.radius.toFixed(2)}"
                fill="${n.codes.length ? "#c9a227" : "#888"}"><title>${n.codes.join(", ") || "root"} (${n.count})</title></circle>`,
        )
        .join("")}
      ${layout.leaves
        .map(
          (l) => `<g class="leaf ${cls(l.state)}" data-student="${esc(l.student)}" data-task="${esc(l.task)}" transform="translate(${l.x},${l.y})">
            <rect class="leaf-tag" width="74" height="16" rx="3"></rect>
            <text x="4" y="12">${esc(l.student)}/${esc(l.task)}</text>
            <rect class="leaf-score" x="78" width="28" height="16" rx="3" fill="${l.scoreColor}"></rect>
            <text class="score-text" x="82" y="12">${l.score.toFixed(2)}</text></g>`,
        )
        .join("")}
      ${layout.elided
        .map((e) => `<text class="elided" x="${e.x}" y="${e.y + 12}">+${e.count} pruned</text>`)
        .join("")}
    </svg>`;
  el("tree").innerHTML = svg;
  el("tree").querySelectorAll<HTMLElement>(".leaf").forEach((leaf) => {
    leaf.addEventListener("click", () => {
      dispatch({
        type: "select-leaf",
        leaf: { student: leaf.dataset.student ?? "", task: leaf.dataset.task ?? "" },
      });
    });
  });
}

function renderDetail(detail: import("./types.js").ConversationDetail): void {
  const model = buildTranscript(detail, schema);
  el("detail").innerHTML = `
    <h3>${esc(model.task)} &middot; ${esc(model.student)} &middot; score ${model.score.toFixed(2)}</h3>
    <p class="task-description">${esc(model.taskDescription)}</p>
    ${model.turns
      .map(
        (turn) => `
        <div class="turn">
          <div class="turn-prompt"><strong>student:</strong> ${esc(turn.prompt)}
            ${turn.chips.map((c) => `<span class="chip" style="background:${c.color}">${esc(c.abbr)}</span>`).join(" ")}</div>
          <div class="turn-response"><strong>assistant:</strong> ${esc(turn.response)}</div>
          <div class="turn-metrics">R ${turn.relevance.toFixed(2)}${turn.relevanceIsFallback ? "<span class=\"fallback\" title=\"fallback-scored\">*</span>" : ""}
            &middot; C ${turn.correctness} &middot; length ${turn.responseLength} &middot; gain ${turn.informationGain.toFixed(3)}</div>
        </div>`,
      )
      .join("")}`;
}

async function boot(): Promise<void> {
  overview = await api.overview();
  schema = schemaIndex(overview.schema);
  el("status").textContent = `${overview.students.count} students, ${overview.tasks.count} tasks, ${overview.conversations} conversations`;
  el("mode-toggle").addEventListener("click", () => {
    const mode = state.groupingMode === "student_grouping" ? "task_grouping" : "student_grouping";
    dispatch({ type: "set-grouping", mode, groupBy: state.groupBy });
  });
  await refresh();
}

boot().catch((error) => {
  el("status").textContent = `failed to reach the analytics service: ${String(error)}`;
});
