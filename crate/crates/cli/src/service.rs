//! HTTP game service. Sessions live in memory; each session is behind its own
//! async mutex, so mutations of one game are serialized while different
//! games proceed concurrently.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gocycles_core::format::GameRecord;
use gocycles_core::game::MoveError;
use gocycles_core::solver::{solve, SearchLimits};
use gocycles_core::{
    generate, Board, BoardDef, EdgeId, GameState, Move, Orientation, Player, Status, VertexId, WinReason,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::{solver_move, Engine};

#[derive(Debug, Clone)]
pub struct Config {
    /// Analysis is refused for boards with more edges than this.
    pub max_analysis_edges: usize,
    pub limits: SearchLimits,
    /// Wall-clock bound on analysis and solver engine moves.
    pub timeout: Duration,
    /// When set, every session's game record is written here after each move.
    pub record_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_analysis_edges: 14,
            limits: SearchLimits { max_nodes: 200_000_000, ..SearchLimits::default() },
            timeout: Duration::from_secs(30),
            record_dir: None,
        }
    }
}

struct Session {
    state: GameState,
    engine_role: Option<Player>,
    engine: Option<Engine>,
    created: u128,
    updated: u128,
}

struct AppState {
    config: Config,
    sessions: Mutex<HashMap<String, Arc<tokio::sync::Mutex<Session>>>>,
}

pub fn router(config: Config) -> Router {
    let app = Arc::new(AppState { config, sessions: Mutex::new(HashMap::new()) });
    Router::new()
        .route("/games", post(create))
        .route("/games/{id}", get(view))
        .route("/games/{id}/moves", post(human_move))
        .route("/games/{id}/engine-move", post(engine_move))
        .route("/games/{id}/analysis", get(analysis))
        .with_state(app)
}

pub async fn serve(host: &str, port: u16, config: Config, out: &mut dyn Write) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    writeln!(out, "listening on http://{}", listener.local_addr()?)?;
    out.flush()?;
    axum::serve(listener, router(config)).await
}

/// An error response: status plus a JSON body with an `error` code.
#[derive(Debug)]
pub struct ApiError(StatusCode, Value);

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError(status, json!({ "error": code, "message": message.into() }))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// `1`, `2`, `"P1"` or `"P2"`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Seat {
    Number(u8),
    Name(Player),
}

#[derive(Debug, Deserialize)]
struct CreateGame {
    board: Option<BoardDef>,
    family: Option<String>,
    engine_role: Option<Seat>,
    #[serde(default = "default_engine")]
    engine_kind: String,
    #[serde(default)]
    seed: u64,
}

fn default_engine() -> String {
    "solver".into()
}

#[derive(Debug, Serialize)]
struct EngineView<'a> {
    role: Option<Player>,
    kind: Option<&'a str>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
enum StatusView {
    InProgress,
    Won { winner: Player, reason: &'static str, cell: Option<usize>, cell_vertices: Option<Vec<VertexId>> },
}

#[derive(Debug, Serialize)]
struct GameView<'a> {
    id: &'a str,
    board: &'a BoardDef,
    marks: &'a [Option<Orientation>],
    history: &'a [Move],
    status: StatusView,
    to_move: Option<Player>,
    legal_moves: Vec<Move>,
    unmarkable: Vec<EdgeId>,
    engine: EngineView<'a>,
    created_ms: u128,
    updated_ms: u128,
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

fn render(id: &str, s: &Session) -> Value {
    let state = &s.state;
    let status = match state.status() {
        Status::InProgress => StatusView::InProgress,
        Status::Won { winner, reason: WinReason::CycleCell(c) } => StatusView::Won {
            winner,
            reason: "cycle_cell",
            cell: Some(c),
            cell_vertices: Some(state.board().cells()[c].clone()),
        },
        Status::Won { winner, reason: WinReason::LastMove } => {
            StatusView::Won { winner, reason: "last_move", cell: None, cell_vertices: None }
        }
    };
    let over = state.status().is_over();
    let view = GameView {
        id,
        board: state.board().def(),
        marks: state.marks(),
        history: state.history(),
        status,
        to_move: (!over).then(|| state.to_move()),
        legal_moves: state.legal_moves(),
        unmarkable: if over { Vec::new() } else { state.unmarkable_edges() },
        engine: EngineView { role: s.engine_role, kind: s.engine.as_ref().map(|e| e.kind()) },
        created_ms: s.created,
        updated_ms: s.updated,
    };
    serde_json::to_value(view).expect("views serialize")
}

fn session(app: &AppState, id: &str) -> Result<Arc<tokio::sync::Mutex<Session>>, ApiError> {
    let sessions = app.sessions.lock().expect("session map lock");
    sessions
        .get(id)
        .cloned()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no game {id}")))
}

fn persist(app: &AppState, id: &str, s: &Session) {
    if let Some(dir) = &app.config.record_dir {
        // best effort: a failed write never fails the move
        let _ = std::fs::write(dir.join(format!("{id}.json")), GameRecord::of(&s.state).to_json());
    }
}

fn unprocessable(code: &str, message: impl Into<String>) -> ApiError {
    ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
}

async fn create(
    State(app): State<Arc<AppState>>,
    Json(req): Json<CreateGame>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let board = match (req.board, req.family) {
        (Some(def), None) => Board::new(def).map_err(|e| {
            let errors: Vec<String> = e.0.errors().map(|v| v.to_string()).collect();
            ApiError(StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": "invalid_board", "violations": errors }))
        })?,
        (None, Some(family)) => {
            let family = family
                .parse()
                .map_err(|e: gocycles_core::generators::GenError| unprocessable("bad_family", e.to_string()))?;
            generate(&family).map_err(|e| unprocessable("bad_family", e.to_string()))?
        }
        _ => return Err(unprocessable("bad_request", "give exactly one of board and family")),
    };
    let board = Arc::new(board);
    let engine_role = match req.engine_role {
        None => None,
        Some(Seat::Name(p)) => Some(p),
        Some(Seat::Number(n)) => {
            Some(Player::from_number(n).ok_or_else(|| unprocessable("bad_request", "engine_role must be 1 or 2"))?)
        }
    };
    let engine = match engine_role {
        Some(p) => Some(
            Engine::new(&req.engine_kind, &board, p, app.config.limits, req.seed)
                .map_err(|e| unprocessable("engine_refused", e.to_string()))?,
        ),
        None => None,
    };
    let id = uuid::Uuid::new_v4().simple().to_string();
    let now = now_ms();
    let s = Session { state: GameState::new(board), engine_role, engine, created: now, updated: now };
    let body = render(&id, &s);
    persist(&app, &id, &s);
    app.sessions.lock().expect("session map lock").insert(id, Arc::new(tokio::sync::Mutex::new(s)));
    Ok((StatusCode::CREATED, Json(body)))
}

async fn view(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Value> {
    let s = session(&app, &id)?;
    let s = s.lock().await;
    Ok(Json(render(&id, &s)))
}

async fn human_move(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(mv): Json<Move>,
) -> ApiResult<Value> {
    let s = session(&app, &id)?;
    let mut s = s.lock().await;
    if !s.state.status().is_over() && s.engine_role == Some(s.state.to_move()) {
        return Err(ApiError::new(StatusCode::CONFLICT, "engine_turn", "it is the engine's turn"));
    }
    match s.state.play(mv) {
        Ok(()) => {}
        Err(MoveError::Illegal { mv, violation }) => {
            return Err(ApiError(
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({ "error": "illegal_move", "move": mv, "violation": violation, "message": violation.to_string() }),
            ));
        }
        Err(e @ MoveError::NoSuchEdge(_)) => return Err(unprocessable("no_such_edge", e.to_string())),
    }
    s.updated = now_ms();
    persist(&app, &id, &s);
    Ok(Json(render(&id, &s)))
}

async fn engine_move(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Value> {
    let s = session(&app, &id)?;
    let mut s = s.lock().await;
    let Some(role) = s.engine_role else {
        return Err(ApiError::new(StatusCode::CONFLICT, "no_engine", "this game has no engine"));
    };
    if s.state.status().is_over() {
        return Err(ApiError::new(StatusCode::CONFLICT, "game_over", "the game is over"));
    }
    if s.state.to_move() != role {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "not_engine_turn",
            format!("{} is to move", s.state.to_move()),
        ));
    }
    let Session { state, engine, .. } = &mut *s;
    let mv = match engine.as_mut().expect("seated engines exist") {
        Engine::Solver(limits) => {
            let (state, limits) = (state.clone(), *limits);
            off_path(&app, move || solver_move(&state, &limits).map_err(|e| e.to_string())).await?
        }
        engine => engine.choose(state).map_err(|e| unprocessable("engine_failed", e.to_string()))?,
    };
    s.state.play(mv).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "engine_failed", e.to_string()))?;
    s.updated = now_ms();
    persist(&app, &id, &s);
    let board = s.state.board_arc().clone();
    Ok(Json(json!({ "move": mv, "arrow": mv.display(&board), "game": render(&id, &s) })))
}

/// Run a solver call on the blocking pool under the configured timeout.
async fn off_path<T, F>(app: &AppState, work: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, String> + Send + 'static,
{
    let task = tokio::task::spawn_blocking(work);
    match tokio::time::timeout(app.config.timeout, task).await {
        Err(_) => Err(ApiError::new(StatusCode::GATEWAY_TIMEOUT, "timeout", "the solver ran out of time")),
        Ok(Err(join)) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "solver_failed", join.to_string())),
        Ok(Ok(Err(msg))) => Err(ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "resource_limit", msg)),
        Ok(Ok(Ok(v))) => Ok(v),
    }
}

async fn analysis(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Value> {
    let s = session(&app, &id)?;
    let state = s.lock().await.state.clone();
    let edges = state.board().edge_count();
    let limit = app.config.max_analysis_edges;
    if edges > limit {
        return Err(ApiError(
            StatusCode::UNPROCESSABLE_ENTITY,
            json!({ "error": "too_large", "message": format!("board has {edges} edges; analysis is limited to {limit}"), "edges": edges, "max_analysis_edges": limit }),
        ));
    }
    if let Some(winner) = state.status().winner() {
        return Ok(Json(json!({ "winner": winner, "to_move": null, "winning_moves": [], "principal_line": [] })));
    }
    let limits = app.config.limits;
    let res = off_path(&app, move || solve(&state, &limits).map_err(|e| e.to_string())).await?;
    Ok(Json(json!({
        "to_move": res.to_move,
        "winner": res.winner,
        "mover_wins": res.winner == res.to_move,
        "winning_moves": res.winning_moves,
        "principal_line": res.principal_line,
        "nodes": res.stats.nodes,
        "millis": res.stats.millis() as u64,
    })))
}
