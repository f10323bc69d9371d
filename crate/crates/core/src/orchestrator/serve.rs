//! Read-only HTTP access to a simulation's output directory.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};

use super::simulate::{read_index, CurrentItem};

#[derive(Clone)]
struct AppState {
    dir: Arc<PathBuf>,
}

/// `GET /current`, `GET /poster/{id}.svg`, `GET /audio/{id}.mid`.
pub fn router(dir: impl Into<PathBuf>) -> Router {
    Router::new()
        .route("/current", get(current))
        .route("/poster/{file}", get(poster))
        .route("/audio/{file}", get(audio))
        .with_state(AppState { dir: Arc::new(dir.into()) })
}

pub async fn serve(addr: SocketAddr, dir: impl Into<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(dir)).await
}

fn index(state: &AppState) -> Result<Vec<CurrentItem>, Response> {
    match read_index(&state.dir) {
        Ok(items) => Ok(items),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err((StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response()),
    }
}

async fn current(State(state): State<AppState>) -> Response {
    match index(&state) {
        Ok(items) => Json(items).into_response(),
        Err(r) => r,
    }
}

fn artifact(state: &AppState, file: &str, ext: &str, pick: fn(&CurrentItem) -> Option<&str>, mime: &'static str) -> Response {
    let Some(id) = file.strip_suffix(ext) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    let items = match index(state) {
        Ok(items) => items,
        Err(r) => return r,
    };
    let Some(name) = items.iter().find(|i| i.id == id).and_then(pick) else {
        return StatusCode::NOT_FOUND.into_response();
    };
    match std::fs::read(state.dir.join(name)) {
        Ok(bytes) => ([(header::CONTENT_TYPE, mime)], bytes).into_response(),
        Err(_) => StatusCode::NOT_FOUND.into_response(),
    }
}

async fn poster(State(state): State<AppState>, Path(file): Path<String>) -> Response {
    artifact(&state, &file, ".svg", |i| Some(i.poster.as_str()), "image/svg+xml")
}

async fn audio(State(state): State<AppState>, Path(file): Path<String>) -> Response {
    artifact(&state, &file, ".mid", |i| i.audio.as_deref(), "audio/midi")
}

#[cfg(test)]
mod tests {
    use super::*;
    use axum::body::Body;
    use axum::http::Request;
    use http_body_util::BodyExt;
    use tower::ServiceExt;

    async fn get_path(app: Router, path: &str) -> (StatusCode, Vec<u8>) {
        let resp = app.oneshot(Request::get(path).body(Body::empty()).unwrap()).await.unwrap();
        let status = resp.status();
        (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
    }

    #[tokio::test]
    async fn routes() {
        let dir = tempfile::tempdir().unwrap();
        let app = router(dir.path());
        let (status, body) = get_path(app.clone(), "/current").await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body, b"[]");

        let item = CurrentItem {
            id: "t1".into(),
            text: "hi".into(),
            predominant: vec![Emotion::Joy],
            poster: "t1_3.svg".into(),
            audio: Some("t1_3.mid".into()),
        };
        std::fs::write(dir.path().join("current.json"), serde_json::to_string(&[item]).unwrap()).unwrap();
        std::fs::write(dir.path().join("t1_3.svg"), "<svg/>").unwrap();
        std::fs::write(dir.path().join("t1_3.mid"), b"MThd").unwrap();

        let (status, body) = get_path(app.clone(), "/current").await;
        assert_eq!(status, StatusCode::OK);
        let items: Vec<CurrentItem> = serde_json::from_slice(&body).unwrap();
        assert_eq!(items[0].predominant, vec![Emotion::Joy]);
        assert_eq!(get_path(app.clone(), "/poster/t1.svg").await, (StatusCode::OK, b"<svg/>".to_vec()));
        assert_eq!(get_path(app.clone(), "/audio/t1.mid").await, (StatusCode::OK, b"MThd".to_vec()));
        assert_eq!(get_path(app.clone(), "/poster/t2.svg").await.0, StatusCode::NOT_FOUND);
        assert_eq!(get_path(app, "/poster/t1.png").await.0, StatusCode::NOT_FOUND);
    }

    use crate::emotion::Emotion;
}
